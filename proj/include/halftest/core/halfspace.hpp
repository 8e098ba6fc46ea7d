#pragma once

#include <span>

#include "halftest/core/dataset.hpp"
#include "halftest/core/types.hpp"

namespace halftest {

/// x ↦ sign(direction·x + threshold), sign(0) = +1. Constant classifiers
/// use an infinite threshold.
class Halfspace {
 public:
  /// `direction` must already have unit norm (within 1e-9).
  static Halfspace from_unit(Vector direction, double threshold);
  /// Scales (w, b) by 1/‖w‖ so the direction is unit. Throws for ‖w‖ < 1e-12.
  static Halfspace normalized(std::span<const double> w, double b);
  /// Outputs `label` everywhere.
  static Halfspace constant(std::size_t dim, Label label);

  const Vector& direction() const { return direction_; }
  double threshold() const { return threshold_; }
  std::size_t dim() const { return direction_.size(); }
  bool is_constant() const;

  double margin(std::span<const double> x) const;
  Halfspace negated() const;

 private:
  Halfspace(Vector direction, double threshold);

  Vector direction_;
  double threshold_;
};

Label evaluate(const Halfspace& h, std::span<const double> x);

/// Fraction of points whose label disagrees with h. Throws on empty input.
double empirical_error(const Halfspace& h, const LabeledDataset& s);

}  // namespace halftest
