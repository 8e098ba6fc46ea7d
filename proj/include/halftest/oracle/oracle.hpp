#pragma once

// Reference values computed independently of the library code paths they
// check: numerical quadrature and extended-precision special functions.
// Used by the self-test, the unit tests and the acceptance harness.

#include <span>

#include "halftest/core/halfspace.hpp"

namespace halftest::oracle {

/// Pr_{x∼N(0,I)}[h(x) ≠ g(x)] for two non-constant halfspaces, by adaptive
/// quadrature over the plane spanned by their directions.
double gaussian_disagreement(const Halfspace& h, const Halfspace& g);

/// E_{x∼N(0,1)}[sign(x + t)·x] by quadrature. Equals 2G(t) in closed form.
double chow_magnitude(double t);

/// E[x | x > t] for x ∼ N(0,1), by quadrature.
double truncated_mean(double t);

/// ∫ accept(x₁)·G(x₁) dx₁ for the band filter with center radius `radius`
/// and scale `sigma`, by quadrature.
double acceptance_rate(double radius, double sigma);

/// Φ(t) evaluated in 50-digit arithmetic, returned as a double.
double gaussian_tail_precise(double t);

/// Φ(x + b)/Φ(x) evaluated in 50-digit arithmetic (no underflow for x ≤ 30).
double tail_ratio(double x, double b);

}  // namespace halftest::oracle
