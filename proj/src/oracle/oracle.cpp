#include "halftest/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "halftest/core/linalg.hpp"

namespace halftest::oracle {

namespace {

using Precise = boost::multiprecision::cpp_bin_float_50;

constexpr double kReach = 12.0;  // N(0,1) mass beyond ±12 is below 1e-32

double density(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }

double upper_tail(double t) { return 0.5 * boost::math::erfc(t / std::sqrt(2.0)); }

// Integral of f over [lo, hi] with breakpoints, each piece by 61-point
// Gauss–Kronrod with adaptive refinement.
template <class F>
double integrate(F f, std::initializer_list<double> cuts) {
  std::vector<double> pts{-kReach};
  for (double c : cuts) {
    if (c > -kReach && c < kReach) pts.push_back(c);
  }
  pts.push_back(kReach);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] <= pts[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1],
                                                                           15, 1e-13);
  }
  return total;
}

}  // namespace

double gaussian_disagreement(const Halfspace& h, const Halfspace& g) {
  if (h.is_constant() || g.is_constant()) throw Error("disagreement oracle: constant halfspace");
  const double rho = std::clamp(dot(h.direction(), g.direction()), -1.0, 1.0);
  const double t1 = h.threshold();
  const double t2 = g.threshold();
  // Write g's projection as rho·a + sqrt(1 − rho²)·z with a = h's projection
  // and z an independent standard normal.
  const double spread = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  auto g_positive = [&](double a) {
    const double mean = rho * a + t2;
    if (spread == 0.0) return mean >= 0.0 ? 1.0 : 0.0;
    return upper_tail(-mean / spread);
  };
  auto integrand = [&](double a) {
    const double p = g_positive(a);
    return density(a) * (a + t1 >= 0.0 ? 1.0 - p : p);
  };
  // Parallel directions make g's indicator a step; split there too.
  if (spread == 0.0) return integrate(integrand, {-t1, -t2 / rho});
  return integrate(integrand, {-t1});
}

double chow_magnitude(double t) {
  return integrate([&](double x) { return (x + t >= 0.0 ? 1.0 : -1.0) * x * density(x); }, {-t});
}

double truncated_mean(double t) {
  const double mass = integrate([&](double x) { return x > t ? density(x) : 0.0; }, {t});
  const double first = integrate([&](double x) { return x > t ? x * density(x) : 0.0; }, {t});
  return first / mass;
}

double acceptance_rate(double radius, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw Error("acceptance oracle: sigma must lie in (0,1)");
  const double peak = radius / (1.0 - sigma * sigma);
  const double curvature = (1.0 / (sigma * sigma) - 1.0) / 2.0;
  return integrate(
      [&](double x) { return std::exp(-curvature * (x - peak) * (x - peak)) * density(x); },
      {peak});
}

double gaussian_tail_precise(double t) {
  const Precise x(t);
  return static_cast<double>(boost::multiprecision::erfc(x / boost::multiprecision::sqrt(Precise(2))) / 2);
}

double tail_ratio(double x, double b) {
  const Precise root2 = boost::multiprecision::sqrt(Precise(2));
  const Precise num = boost::multiprecision::erfc((Precise(x) + Precise(b)) / root2);
  const Precise den = boost::multiprecision::erfc(Precise(x) / root2);
  if (den == 0) throw Error("tail_ratio: tail underflow");
  return static_cast<double>(num / den);
}

}  // namespace halftest::oracle
