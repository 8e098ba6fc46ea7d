#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "halftest/core/halfspace.hpp"
#include "halftest/synth/generate.hpp"

namespace halftest::cli {

/// Everything a gen/learn/sweep run needs. Every field has a default.
///
/// The ground truth for threshold t* is sign(direction·x − t*), so the
/// decision boundary sits at distance t* from the origin and the +1 side
/// is the minority for t* > 0.
struct ExperimentConfig {
  std::size_t d = 5;
  std::size_t n = 100'000;
  double epsilon = 0.05;
  double tau = 0.1;
  std::uint64_t seed = 1;
  synth::Marginal marginal;
  std::string direction = "e1";          // "e<k>" or d comma-separated floats
  std::vector<double> thresholds{0.0};   // t* grid
  synth::Adversary adversary = synth::Adversary::TailFlip;
  std::vector<double> budgets{0.0};      // opt grid
  std::size_t trials = 1;                // per sweep cell
  std::size_t holdout = 100'000;         // fresh points scoring each sweep trial
  bool timing = false;                   // fill the CSV seconds column
  std::string out;

  /// Throws Error on out-of-range values.
  void validate() const;
  /// Unit direction of the ground truth in dimension d.
  Vector truth_direction() const;
  Halfspace truth(double t_star) const;
};

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
/// Unknown or repeated keys are errors. List values are comma-separated.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Applies one key/value pair with the same rules as the file parser.
void set_field(ExperimentConfig& config, const std::string& key, const std::string& value);

std::vector<double> parse_list(const std::string& text);

/// Canonical `key = value` dump, readable by parse_config.
std::string to_text(const ExperimentConfig& config);

}  // namespace halftest::cli
