#include "halftest/localization/localization.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"

namespace halftest::localization {

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw Error("rejection sampling: sigma must lie in (0,1), got " + std::to_string(sigma));
  }
}

// x + (scale − 1)·axis·(axis·x)
Vector rank_one_scale(const Vector& axis, double scale, std::span<const double> x) {
  if (x.size() != axis.size()) throw Error("rejection sampling: dimension mismatch");
  Vector out(x.begin(), x.end());
  axpy((scale - 1.0) * dot(axis, x), axis, out);
  return out;
}

}  // namespace

RejectionParams::RejectionParams(Vector axis, double radius, double sigma)
    : axis_(std::move(axis)), radius_(radius), sigma_(sigma) {
  check_sigma(sigma);
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw Error("rejection sampling: bad radius");
}

RejectionParams RejectionParams::centered_at(std::span<const double> w) {
  return centered_at(w, sigma_for(w));
}

RejectionParams RejectionParams::centered_at(std::span<const double> w, double sigma) {
  const double r = norm2(w);
  if (!(r > 0.0)) throw Error("rejection sampling: center must be nonzero");
  return RejectionParams(normalized(w), r, sigma);
}

RejectionParams RejectionParams::along(std::span<const double> axis, double radius,
                                       double sigma) {
  if (std::abs(norm2(axis) - 1.0) > 1e-9) throw Error("rejection sampling: axis must be unit");
  return RejectionParams(Vector(axis.begin(), axis.end()), radius, sigma);
}

RejectionParams RejectionParams::band(std::span<const double> axis, double sigma) {
  return along(axis, 0.0, sigma);
}

Vector RejectionParams::center() const {
  Vector c = axis_;
  for (double& v : c) v *= radius_;
  return c;
}

Vector RejectionParams::sigma_half(std::span<const double> x) const {
  return rank_one_scale(axis_, sigma_, x);
}

Vector RejectionParams::sigma_inv_half(std::span<const double> x) const {
  return rank_one_scale(axis_, 1.0 / sigma_, x);
}

double sigma_for(std::span<const double> w) {
  const double r = norm2(w);
  if (!(r > 0.0)) throw Error("sigma_for: zero vector");
  return std::min(1.0 / r, std::numbers::sqrt2 / 2.0);
}

double accept_probability(const RejectionParams& p, std::span<const double> x) {
  if (x.size() != p.dim()) throw Error("accept_probability: dimension mismatch");
  const double gap = dot(p.axis(), x) - p.peak();
  return std::exp(-p.curvature() * gap * gap);
}

double expected_acceptance(const RejectionParams& p) {
  const double s2 = p.sigma() * p.sigma();
  return p.sigma() * std::exp(-p.radius() * p.radius() / (2.0 * (1.0 - s2)));
}

FilterResult reject_filter(const LabeledDataset& s, const RejectionParams& p, std::uint64_t seed,
                           PeakSide side) {
  if (s.dim() != p.dim()) throw Error("reject_filter: dimension mismatch");
  const std::uint64_t key = derive_seed(seed, StreamRole::RejectFilter);
  const double peak = side == PeakSide::Toward ? p.peak() : -p.peak();
  const double a = p.curvature();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double gap = dot(p.axis(), s.x(i)) - peak;
    if (a * gap * gap <= -std::log(counter_uniform(key, i))) keep.push_back(i);
  }
  FilterResult out{s.subset(keep), 0.0, false};
  out.acceptance_fraction =
      s.empty() ? 0.0 : static_cast<double>(keep.size()) / static_cast<double>(s.size());
  out.starved = keep.size() < kMinSurvivors;
  return out;
}

Vector to_isotropic(const RejectionParams& p, std::span<const double> x) {
  if (x.size() != p.dim()) throw Error("to_isotropic: dimension mismatch");
  Vector shifted(x.begin(), x.end());
  axpy(-p.radius(), p.axis(), shifted);
  return p.sigma_inv_half(shifted);
}

Vector from_isotropic(const RejectionParams& p, std::span<const double> z) {
  Vector x = p.sigma_half(z);
  axpy(p.radius(), p.axis(), x);
  return x;
}

LabeledDataset to_isotropic(const RejectionParams& p, const LabeledDataset& s) {
  if (s.dim() != p.dim()) throw Error("to_isotropic: dimension mismatch");
  LabeledDataset out = s;
  const Vector& u = p.axis();
  const double stretch = 1.0 / p.sigma() - 1.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto x = out.x_mut(i);
    axpy(-p.radius(), u, x);
    axpy(stretch * dot(u, x), u, x);
  }
  return out;
}

Halfspace transformed_halfspace(const RejectionParams& p, const Halfspace& h) {
  if (h.dim() != p.dim()) throw Error("transformed_halfspace: dimension mismatch");
  if (h.is_constant()) throw Error("transformed_halfspace: constant hypothesis");
  const Vector u = p.sigma_half(h.direction());
  const double n = norm2(u);
  if (!(n >= 1e-12)) throw Error("transformed_halfspace: degenerate direction");
  const double offset = p.radius() * dot(h.direction(), p.axis()) + h.threshold();
  return Halfspace::normalized(u, offset);
}

Vector revert_direction(std::span<const double> v, const RejectionParams& p) {
  if (std::abs(norm2(v) - 1.0) > 1e-9) throw Error("revert_direction: input must be unit");
  return normalized(p.sigma_inv_half(v));
}

double reversion_error_bound(const ReversionBound& b, double k) {
  check_sigma(b.sigma);
  if (!(b.delta >= 0.0 && b.delta < 1.0)) throw Error("reversion bound: delta must lie in [0,1)");
  if (!(b.beta >= 0.0)) throw Error("reversion bound: beta must be nonnegative");
  if (!(b.beta < std::numbers::sqrt2)) throw Error("reversion bound: beta must be below sqrt(2)");
  const double pole = 1.0 - b.beta * b.beta / 2.0;
  return k * b.delta * (b.sigma + b.beta) * (b.beta / (b.sigma * pole) + 1.0);
}

}  // namespace halftest::localization
