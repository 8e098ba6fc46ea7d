#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/core/halfspace.hpp"
#include "halftest/core/verdict.hpp"

namespace halftest::centers {

enum class CenterSource { TailMeanPlus, TailMeanMinus, ChowPath };

std::string_view to_string(CenterSource s);

struct CenterCandidate {
  Vector point;
  CenterSource source = CenterSource::ChowPath;
  long grid_index = 0;
};

struct TailStats {
  double minority_mass = 0.0;  // min of the two empirical label fractions
  Vector tail_mean;            // mean of the points carrying tail_label
  Label tail_label = Label::positive;
  std::size_t count = 0;       // points carrying tail_label
};

/// Empty when no point carries `label`.
std::optional<TailStats> tail_mean(const LabeledDataset& s, Label label);

struct MomentCheck {
  int degree = 4;
  /// Zero selects testers::default_moment_tol(degree, n).
  double tolerance = 0.0;
};

struct CenterSearchOptions {
  double epsilon = 0.05;
  MomentCheck moments;
  /// Below this many points of either label, the tail-mean passes are
  /// skipped and only the Chow path runs.
  std::size_t min_tail_points = 100;
};

struct CenterList {
  std::vector<CenterCandidate> candidates;
  double minority_mass = 0.0;
  bool tail_passes_skipped = false;
  double tail_norm_plus = 0.0;
  double tail_norm_minus = 0.0;
  double chow_norm = 0.0;
  std::size_t per_pass_cap = 0;

  /// Unit direction of each ray that produced grid points; empty when the
  /// source contributed only the origin or did not run.
  Vector ray_plus;
  Vector ray_minus;
  Vector ray_chow;

  const Vector& ray(CenterSource source) const;
};

/// Points i·ε²·ŵ, i = 0 … ⌈10/ε²⌉, with ŵ the normalized Chow vector, after a
/// moment check; only the origin when ‖Ê[yx]‖ < ε.
Checked<CenterList> chow_center_search(const LabeledDataset& s, double epsilon,
                                       const MomentCheck& moments = {});

/// ⌈2·log(1/B̃)/ε²⌉ + ⌈1/(ε²·√log(1/B̃))⌉ + 1.
std::size_t tail_grid_cap(double minority_mass, double epsilon);

/// Candidate list containing a good localization center for whichever
/// halfspace labels s best, or a rejection naming the failed check.
/// Order: TailMeanPlus grid, TailMeanMinus grid, ChowPath grid.
Checked<CenterList> find_centers(const LabeledDataset& s, const CenterSearchOptions& options);

struct CenterQuality {
  double alpha = 0.0;  // distance from the candidate to the truth's hyperplane
  double beta = 0.0;   // Pr[Z > ‖c‖]
};

/// Ground-truth oracle for tests and experiments.
CenterQuality center_quality(const CenterCandidate& c, const Halfspace& truth);

}  // namespace halftest::centers
