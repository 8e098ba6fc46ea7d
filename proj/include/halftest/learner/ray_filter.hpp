#pragma once

#include <cstdint>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/localization/localization.hpp"

namespace halftest::learner {

/// Rejection filtering of one dataset against many centers that lie on a
/// few rays. Per-point uniforms and per-ray projections are computed once;
/// each query returns exactly the indices that localization::reject_filter
/// (same dataset, same seed) would keep, truncated to the first `cap`.
class RayFilter {
 public:
  RayFilter(const LabeledDataset& s, std::uint64_t seed);

  /// Registers a unit ray direction; returns its id.
  std::size_t add_ray(const Vector& unit);

  /// `p.axis()` must be bitwise equal to the registered ray.
  std::vector<std::size_t> first_survivors(std::size_t ray,
                                           const localization::RejectionParams& p,
                                           std::size_t cap) const;

 private:
  struct Ray {
    Vector unit;
    std::vector<double> projection;     // by point index
    std::vector<std::uint32_t> order;   // point indices sorted by projection
    std::vector<double> sorted;         // projections in that order
  };

  const LabeledDataset& data_;
  std::vector<double> budget_;  // −log uᵢ
  double max_budget_ = 0.0;
  std::vector<Ray> rays_;
};

}  // namespace halftest::learner
