#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "halftest/cli/config.hpp"
#include "halftest/cli/report.hpp"

namespace halftest::cli {

enum ExitCode : int {
  kExitSuccess = 0,   // success, or the learner accepted
  kExitUsage = 1,     // bad arguments, unreadable or malformed input, IO failure
  kExitRejected = 2,  // a tester rejected the sample
};

/// Generates one dataset (single budget and threshold) and writes it to
/// config.out.
int cmd_gen(const ExperimentConfig& config, std::ostream& out);

/// Holds out a fifth of the file for scoring, runs the boosted learner on
/// the rest, and reports the verdict with every tester diagnostic seen.
int cmd_learn(const std::string& dataset_path, const ExperimentConfig& config,
              std::ostream& out);

/// Seed of sweep trial `position` (cells in budget-major order, trials
/// innermost). Depends only on the position, never on scheduling.
std::uint64_t sweep_trial_seed(std::uint64_t seed, std::size_t position);

/// One CSV row per (budget, t*, trial), in that nesting order. `workers`
/// threads share the trials; the rows do not depend on the worker count.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t workers = 1);

/// run_sweep, then writes <out>.csv and <out>.json (out defaults to
/// "sweep") and prints the per-cell summary.
int cmd_sweep(const ExperimentConfig& config, std::size_t workers, std::ostream& out);

/// Runs the built-in property suite, one line per property.
int cmd_selftest(std::ostream& out);

}  // namespace halftest::cli
