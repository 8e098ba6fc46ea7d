#pragma once

#include <cstdint>
#include <span>

#include "halftest/core/dataset.hpp"
#include "halftest/core/halfspace.hpp"

namespace halftest::localization {

/// Center w = radius·axis, scale σ, and Σ = I − (1−σ²)·axis·axisᵀ. Σ is
/// never stored; Σ^{±1/2} = I + (σ^{±1} − 1)·axis·axisᵀ is applied directly.
class RejectionParams {
 public:
  /// σ from sigma_for(w). Throws for w = 0.
  static RejectionParams centered_at(std::span<const double> w);
  static RejectionParams centered_at(std::span<const double> w, double sigma);
  /// Center radius·axis for a unit `axis`, used when the axis is already
  /// known exactly (so filters along a shared ray agree bit for bit).
  static RejectionParams along(std::span<const double> axis, double radius, double sigma);
  /// Origin-centered band of width σ across `axis` (unit).
  static RejectionParams band(std::span<const double> axis, double sigma);

  const Vector& axis() const { return axis_; }
  double radius() const { return radius_; }
  double sigma() const { return sigma_; }
  std::size_t dim() const { return axis_.size(); }
  Vector center() const;

  /// axis·x value at which acceptance is certain: radius/(1−σ²).
  double peak() const { return radius_ / (1.0 - sigma_ * sigma_); }
  /// (σ⁻² − 1)/2, the curvature of the log acceptance probability.
  double curvature() const { return 0.5 * (1.0 / (sigma_ * sigma_) - 1.0); }

  /// Σ^{1/2}x and Σ^{−1/2}x.
  Vector sigma_half(std::span<const double> x) const;
  Vector sigma_inv_half(std::span<const double> x) const;

 private:
  RejectionParams(Vector axis, double radius, double sigma);

  Vector axis_;
  double radius_;
  double sigma_;
};

/// min(1/‖w‖, √½). Throws for w = 0.
double sigma_for(std::span<const double> w);

/// exp(−(σ⁻² − 1)(axis·x − ‖w‖/(1−σ²))²/2). Points accepted with this
/// probability from N(0, I) are distributed as N(w, Σ).
double accept_probability(const RejectionParams& p, std::span<const double> x);

/// σ·exp(−‖w‖²/(2(1−σ²))), the acceptance rate under N(0, I).
double expected_acceptance(const RejectionParams& p);

constexpr std::size_t kMinSurvivors = 100;

struct FilterResult {
  LabeledDataset kept;
  double acceptance_fraction = 0.0;
  /// Fewer than kMinSurvivors points survived.
  bool starved = false;
};

enum class PeakSide {
  Toward,  // acceptance peaks at +‖w‖/(1−σ²); the only correct choice
  Away,    // mirrored peak; exists so the self-test can show it is caught
};

/// Keeps point i iff curvature·(axis·xᵢ − peak)² ≤ −log uᵢ, where uᵢ ∈ (0, 1]
/// is a pure function of (seed, i). Kept points stay in input order.
FilterResult reject_filter(const LabeledDataset& s, const RejectionParams& p, std::uint64_t seed,
                           PeakSide side = PeakSide::Toward);

/// Σ^{−1/2}(x − w).
Vector to_isotropic(const RejectionParams& p, std::span<const double> x);
/// w + Σ^{1/2}z, the inverse of to_isotropic.
Vector from_isotropic(const RejectionParams& p, std::span<const double> z);
LabeledDataset to_isotropic(const RejectionParams& p, const LabeledDataset& s);

/// The halfspace that labels to_isotropic(x) exactly as h labels x.
Halfspace transformed_halfspace(const RejectionParams& p, const Halfspace& h);

/// Σ^{−1/2}v normalized.
Vector revert_direction(std::span<const double> v, const RejectionParams& p);

struct ReversionBound {
  double sigma = 0.5;
  double beta = 0.0;   // distance between the center direction and the truth
  double delta = 0.0;  // error of the direction learned in the localized frame
};

constexpr double kReversionConstant = 8.0;

/// K·δ·(σ + β)·(β/(σ(1 − β²/2)) + 1). Throws for β ≥ √2.
double reversion_error_bound(const ReversionBound& b, double k = kReversionConstant);

}  // namespace halftest::localization
