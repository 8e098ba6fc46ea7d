#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "halftest/centers/centers.hpp"
#include "halftest/core/dataset.hpp"
#include "halftest/core/halfspace.hpp"
#include "halftest/core/verdict.hpp"
#include "halftest/localization/localization.hpp"

namespace halftest::learner {

/// Threshold grid i·ε, |i| ≤ ⌈log(1/ε)/ε⌉, on the direction revert_direction(v, p)
/// (or on v itself when no localization was applied).
std::vector<Halfspace> build_hypotheses(std::span<const double> v,
                                        const localization::RejectionParams* p, double epsilon);

/// ⌈log(1/ε)/ε⌉.
long threshold_steps(double epsilon);

/// η for the full-sample wedge gate: max(ε, (20/n)^{1/3}) capped at 1/4, so
/// the band-mass statistic has room above its sampling noise at n points.
double outer_wedge_eta(double epsilon, std::size_t n);

/// Empirical errors of sign(v·x + i·ε) for i = −m … m, in that order, in
/// one pass over s. Matches empirical_error on each threshold exactly.
std::vector<std::size_t> threshold_mistakes(const LabeledDataset& s, std::span<const double> v,
                                            double epsilon, long m);

enum class CandidateStatus { Used, Starved, Skipped };

struct CandidateRecord {
  centers::CenterSource source = centers::CenterSource::ChowPath;
  long grid_index = 0;
  double radius = 0.0;
  double sigma = 0.0;
  std::size_t localized = 0;
  CandidateStatus status = CandidateStatus::Skipped;
  std::optional<Rejection> reason;
  Vector direction;  // reverted direction when used
  double inner_wedge_total_variation = -1.0;  // worst over refinement rounds; −1 if none ran
  double outer_wedge_total_variation = 0.0;
  double outer_wedge_orthogonal_norm = 0.0;
};

struct LearnOutcome {
  bool accepted = false;
  std::optional<Rejection> rejection;

  std::optional<Halfspace> chosen;
  double selection_error = 0.0;  // on the held-out selection part
  std::size_t hypotheses_considered = 0;

  std::size_t fit_size = 0;
  std::size_t select_size = 0;
  double minority_mass = 0.0;
  std::vector<CandidateRecord> candidates;
  /// Every rejection seen while skipping candidates, by test, with the first
  /// occurrence kept as an example.
  std::map<TestKind, std::pair<std::size_t, Rejection>> skip_reasons;
  double outer_eta = 0.0;
  double worst_outer_wedge_total_variation = 0.0;
  double worst_outer_wedge_orthogonal_norm = 0.0;

  std::size_t used_candidates() const;
};

struct PipelineDefaults {
  static constexpr std::size_t inner_sample_cap = 15'000;
  static constexpr std::size_t wedge_sample_cap = 50'000;
  static constexpr std::size_t min_localized = 5'000;
};

/// Full tester-learner on one sample: split into fit/select parts, search
/// for localization centers, learn a direction per center, gate each on the
/// wedge test over the unlocalized sample, then select by held-out error
/// among the threshold grids and the two constant classifiers.
LearnOutcome testable_learn(const LabeledDataset& s, const LearnConfig& config);

}  // namespace halftest::learner
