#pragma once

#include <cstdint>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/core/verdict.hpp"

namespace halftest::learner {

struct NearHomogeneousOptions {
  int moment_degree = 4;
  double moment_tol = 0.0;  // zero: testers::default_moment_tol
  /// Below this Chow-vector norm the sample carries no usable direction.
  double chow_floor = 0.05;
  double wedge_eta = 0.1;
  /// A refinement round runs only if it expects at least this many
  /// localized points (n·σ_r).
  std::size_t min_localized = 5'000;
};

struct RoundRecord {
  int round = 0;
  double sigma = 0.0;
  std::size_t localized = 0;
  double wedge_total_variation = 0.0;
  double wedge_orthogonal_norm = 0.0;
  double chow_norm = 0.0;
  bool applied = false;  // false when the localized Chow signal was too weak
};

struct NearHomogeneousResult {
  Vector direction;
  double initial_chow_norm = 0.0;
  int planned_rounds = 0;
  std::vector<RoundRecord> rounds;
};

/// Learns the direction of a halfspace whose threshold is small relative to
/// ε, from data that should be N(0, I) in x.
///
/// Checks second moments and degree-k moments, starts from the normalized
/// Chow vector, then for r = 1 … ⌈log₂(1/ε)⌉ localizes to an origin-centered
/// band of width σ_r = max(2^−r, ε/4) across the current direction,
/// re-isotropizes, gates on the wedge test, re-estimates the Chow direction
/// and maps it back. Rounds stop early once the band would hold fewer than
/// `min_localized` points.
Checked<NearHomogeneousResult> learn_near_homogeneous(const LabeledDataset& s, double epsilon,
                                                      std::uint64_t seed,
                                                      const NearHomogeneousOptions& options = {});

}  // namespace halftest::learner
