#pragma once

namespace halftest {

/// Upper tail of the standard normal: Pr[Z > t].
double gaussian_tail(double t);

/// Standard normal density.
double gaussian_pdf(double t);

/// Mass of N(0,1) in [lo, hi); either end may be infinite.
double gaussian_interval(double lo, double hi);

}  // namespace halftest
