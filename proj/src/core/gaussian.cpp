#include "halftest/core/gaussian.hpp"

#include <cmath>
#include <numbers>

namespace halftest {

double gaussian_tail(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

double gaussian_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

double gaussian_interval(double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  // Subtract on whichever side keeps both tails small.
  if (lo >= 0.0) return gaussian_tail(lo) - gaussian_tail(hi);
  if (hi <= 0.0) return gaussian_tail(-hi) - gaussian_tail(-lo);
  return 1.0 - gaussian_tail(hi) - gaussian_tail(-lo);
}

}  // namespace halftest
