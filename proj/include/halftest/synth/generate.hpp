#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/core/halfspace.hpp"

namespace halftest::synth {

struct Marginal {
  enum class Kind { StandardGaussian, ScaledGaussian, TwoPointMixture, UniformCube };

  Kind kind = Kind::StandardGaussian;
  double parameter = 0.0;  // scale factor, separation, or half-width

  static Marginal standard_gaussian() { return {}; }
  static Marginal scaled_gaussian(double factor) { return {Kind::ScaledGaussian, factor}; }
  /// First coordinate is (±separation + z)/√(1 + separation²) with a fair
  /// sign and z ~ N(0,1); the remaining coordinates are N(0,1). Mean zero
  /// and identity covariance, but bimodal along e₁.
  static Marginal two_point_mixture(double separation) {
    return {Kind::TwoPointMixture, separation};
  }
  /// Every coordinate uniform on [−halfwidth, halfwidth].
  static Marginal uniform_cube(double halfwidth) { return {Kind::UniformCube, halfwidth}; }

  /// Accepts "gaussian", "scaled:<f>", "mixture:<s>", "cube:<h>".
  static Marginal parse(std::string_view text);
  std::string name() const;
};

enum class Adversary { BoundaryFlip, TailFlip, RandomFlip };

Adversary parse_adversary(std::string_view text);
std::string_view to_string(Adversary a);

struct NoiseProfile {
  double budget = 0.0;
  Adversary strategy = Adversary::TailFlip;
};

struct Generated {
  LabeledDataset data;
  std::size_t requested_flips = 0;
  std::size_t flipped = 0;
  /// TailFlip only: fewer minority points than requested flips.
  bool minority_exhausted = false;
};

/// ⌊budget·n⌋, robust to the product landing a hair below an integer.
std::size_t flip_count(double budget, std::size_t n);

/// Draws n points from `marginal`, labels them with `truth`, then applies
/// the adversary. Features, noise, and any random choices use separate
/// streams derived from `seed`.
Generated generate(std::size_t d, std::size_t n, const Marginal& marginal, const Halfspace& truth,
                   const NoiseProfile& noise, std::uint64_t seed);

/// Disjoint partition by a seeded shuffle; each part keeps the original
/// relative order. Part sizes follow the weights by largest remainder.
std::vector<LabeledDataset> split(const LabeledDataset& s, const std::vector<double>& weights,
                                  std::uint64_t seed);

}  // namespace halftest::synth
