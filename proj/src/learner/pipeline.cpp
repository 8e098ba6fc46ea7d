#include "halftest/learner/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"
#include "halftest/learner/near_homogeneous.hpp"
#include "halftest/learner/ray_filter.hpp"
#include "halftest/synth/generate.hpp"
#include "halftest/testers/testers.hpp"

namespace halftest::learner {

namespace {

constexpr std::size_t kMinSampleSize = 1000;

bool is_distribution_test(TestKind k) {
  switch (k) {
    case TestKind::Covariance:
    case TestKind::Mean:
    case TestKind::Kolmogorov:
    case TestKind::TrimmedStability:
    case TestKind::Moments:
    case TestKind::WedgeMass:
    case TestKind::WedgeConditionalCovariance:
      return true;
    default:
      return false;
  }
}

std::size_t or_default(std::size_t value, std::size_t fallback) {
  return value == 0 ? fallback : value;
}

struct Scored {
  std::size_t mistakes = 0;
  double abs_threshold = 0.0;
  std::size_t index = 0;

  bool beats(const Scored& other) const {
    if (mistakes != other.mistakes) return mistakes < other.mistakes;
    if (abs_threshold != other.abs_threshold) return abs_threshold < other.abs_threshold;
    return index < other.index;
  }
};

}  // namespace

long threshold_steps(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("threshold grid: epsilon must lie in (0,1)");
  return static_cast<long>(std::ceil(std::log(1.0 / epsilon) / epsilon - 1e-9));
}

double outer_wedge_eta(double epsilon, std::size_t n) {
  if (n == 0) throw Error("outer_wedge_eta: empty sample");
  const double floor_eta = std::cbrt(20.0 / static_cast<double>(n));
  return std::min(0.25, std::max(epsilon, floor_eta));
}

std::vector<Halfspace> build_hypotheses(std::span<const double> v,
                                        const localization::RejectionParams* p, double epsilon) {
  const Vector direction = p ? localization::revert_direction(v, *p) : normalized(v);
  const long m = threshold_steps(epsilon);
  std::vector<Halfspace> out;
  out.reserve(static_cast<std::size_t>(2 * m + 1));
  for (long i = -m; i <= m; ++i) {
    out.push_back(Halfspace::from_unit(direction, static_cast<double>(i) * epsilon));
  }
  return out;
}

std::vector<std::size_t> threshold_mistakes(const LabeledDataset& s, std::span<const double> v,
                                            double epsilon, long m) {
  if (v.size() != s.dim()) throw Error("threshold_mistakes: dimension mismatch");
  const auto width = static_cast<std::size_t>(2 * m + 1);
  const std::size_t slots = width + 1;
  // hits[(lane * 2 + positive) * slots + k]: points whose first non-negative
  // threshold index is k (k = width means none). Two lanes by point parity
  // keep consecutive increments independent.
  std::vector<std::uint32_t> hits(4 * slots, 0);
  auto threshold = [&](long i) { return static_cast<double>(i) * epsilon; };
  const std::size_t d = s.dim();
  const double* feats = s.features().data();
  const auto labels = s.labels();
  const double inv_eps = 1.0 / epsilon;
  const double lowest = static_cast<double>(-m);
  const double highest = static_cast<double>(m + 1);
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double* x = feats + j * d;
    double proj = 0.0;
    for (std::size_t a = 0; a < d; ++a) proj += v[a] * x[a];
    // The guess only seeds the search; the loops below make it exact.
    const double guess = std::clamp(-proj * inv_eps, lowest, highest);
    long g = static_cast<long>(guess);
    g += static_cast<long>(static_cast<double>(g) < guess);
    while (g > -m && proj + threshold(g - 1) >= 0.0) --g;
    while (g <= m && proj + threshold(g) < 0.0) ++g;
    const std::size_t row = (j & 1) * 2 + (labels[j] == Label::positive ? 1 : 0);
    ++hits[row * slots + static_cast<std::size_t>(g + m)];
  }
  // A positive point is wrong at every index below its k, a negative one at
  // every index from k on.
  std::vector<std::size_t> out(width);
  std::size_t positives_above = 0;
  std::size_t negatives_at_or_below = 0;
  for (std::size_t k = 0; k < slots; ++k) {
    positives_above += hits[1 * slots + k] + hits[3 * slots + k];
  }
  for (std::size_t k = 0; k < width; ++k) {
    positives_above -= hits[1 * slots + k] + hits[3 * slots + k];
    negatives_at_or_below += hits[0 * slots + k] + hits[2 * slots + k];
    out[k] = positives_above + negatives_at_or_below;
  }
  return out;
}

std::size_t LearnOutcome::used_candidates() const {
  return static_cast<std::size_t>(std::count_if(
      candidates.begin(), candidates.end(),
      [](const CandidateRecord& c) { return c.status == CandidateStatus::Used; }));
}

LearnOutcome testable_learn(const LabeledDataset& s, const LearnConfig& config) {
  config.validate();
  if (s.size() < kMinSampleSize) {
    throw Error("testable_learn: need at least " + std::to_string(kMinSampleSize) + " points");
  }
  const double eps = config.epsilon;
  const std::size_t inner_cap = or_default(config.inner_sample_cap, PipelineDefaults::inner_sample_cap);
  const std::size_t wedge_cap = or_default(config.wedge_sample_cap, PipelineDefaults::wedge_sample_cap);

  LearnOutcome out;
  auto parts = synth::split(s, {1.0 - config.select_fraction, config.select_fraction}, config.seed);
  const LabeledDataset& fit = parts[0];
  const LabeledDataset& select = parts[1];
  out.fit_size = fit.size();
  out.select_size = select.size();

  centers::CenterSearchOptions search;
  search.epsilon = eps;
  auto found = centers::find_centers(fit, search);
  if (!found) {
    out.rejection = found.rejection();
    return out;
  }
  const centers::CenterList& list = found.value();
  out.minority_mass = list.minority_mass;

  NearHomogeneousOptions inner;
  inner.min_localized = or_default(config.min_localized, PipelineDefaults::min_localized);

  RayFilter filter(fit, config.seed);
  std::map<centers::CenterSource, std::size_t> ray_ids;
  for (auto source : {centers::CenterSource::TailMeanPlus, centers::CenterSource::TailMeanMinus,
                      centers::CenterSource::ChowPath}) {
    if (!list.ray(source).empty()) ray_ids[source] = filter.add_ray(list.ray(source));
  }

  const LabeledDataset wedge_sample = fit.prefix(wedge_cap);
  const testers::WedgeWorkspace wedge_workspace(wedge_sample);
  out.outer_eta = outer_wedge_eta(eps, wedge_sample.size());
  const LabeledDataset origin_sample = fit.prefix(inner_cap);

  std::optional<Checked<NearHomogeneousResult>> origin_result;
  std::map<Vector, testers::WedgeStatistics> wedge_cache;
  std::vector<Vector> directions;

  for (std::size_t k = 0; k < list.candidates.size(); ++k) {
    const auto& cand = list.candidates[k];
    CandidateRecord rec;
    rec.source = cand.source;
    rec.grid_index = cand.grid_index;
    rec.radius = norm2(cand.point);

    std::optional<localization::RejectionParams> params;
    Checked<NearHomogeneousResult> result = Rejection{TestKind::Starvation, 0, 0, ""};
    if (rec.radius == 0.0) {
      if (!origin_result) {
        origin_result = learn_near_homogeneous(
            origin_sample, eps, derive_seed(config.seed, StreamRole::InnerFilter, 0), inner);
      }
      result = *origin_result;
      rec.localized = origin_sample.size();
    } else {
      rec.sigma = localization::sigma_for(cand.point);
      params = localization::RejectionParams::along(list.ray(cand.source), rec.radius, rec.sigma);
      const auto kept = filter.first_survivors(ray_ids.at(cand.source), *params, inner_cap);
      rec.localized = kept.size();
      if (kept.size() < localization::kMinSurvivors) {
        rec.status = CandidateStatus::Starved;
        out.candidates.push_back(std::move(rec));
        continue;
      }
      const LabeledDataset local = localization::to_isotropic(*params, fit.subset(kept));
      result = learn_near_homogeneous(local, eps,
                                      derive_seed(config.seed, StreamRole::InnerFilter, k + 1),
                                      inner);
    }

    if (!result) {
      rec.status = CandidateStatus::Skipped;
      rec.reason = result.rejection();
      auto [it, inserted] =
          out.skip_reasons.try_emplace(result.rejection().test, 0, result.rejection());
      ++it->second.first;
      out.candidates.push_back(std::move(rec));
      continue;
    }
    for (const auto& round : result.value().rounds) {
      rec.inner_wedge_total_variation =
          std::max(rec.inner_wedge_total_variation, round.wedge_total_variation);
    }
    rec.direction = params ? localization::revert_direction(result.value().direction, *params)
                           : result.value().direction;

    auto cached = wedge_cache.find(rec.direction);
    if (cached == wedge_cache.end()) {
      cached = wedge_cache
                   .emplace(rec.direction,
                            wedge_workspace.statistics(rec.direction, out.outer_eta))
                   .first;
    }
    const auto& wedge = cached->second;
    rec.outer_wedge_total_variation = wedge.total_variation;
    rec.outer_wedge_orthogonal_norm = wedge.worst_orthogonal_norm;
    out.worst_outer_wedge_total_variation =
        std::max(out.worst_outer_wedge_total_variation, wedge.total_variation);
    out.worst_outer_wedge_orthogonal_norm =
        std::max(out.worst_outer_wedge_orthogonal_norm, wedge.worst_orthogonal_norm);
    if (auto v = testers::wedge_verdict(wedge, out.outer_eta); !v) {
      Rejection r = v.rejection();
      r.detail += " (unlocalized sample, direction from " +
                  std::string(centers::to_string(cand.source)) + " candidate " +
                  std::to_string(cand.grid_index) + ")";
      out.rejection = std::move(r);
      rec.status = CandidateStatus::Skipped;
      out.candidates.push_back(std::move(rec));
      return out;
    }
    rec.status = CandidateStatus::Used;
    if (std::find(directions.begin(), directions.end(), rec.direction) == directions.end()) {
      directions.push_back(rec.direction);
    }
    out.candidates.push_back(std::move(rec));
  }

  if (directions.empty()) {
    for (const auto& [kind, entry] : out.skip_reasons) {
      if (is_distribution_test(kind)) {
        out.rejection = Rejection{TestKind::NoViableCenter, 0.0, 0.0,
                                  "every center skipped; first tester failure: " +
                                      entry.second.describe()};
        return out;
      }
    }
  }

  // Selection over threshold grids, then the two constants.
  const long m = threshold_steps(eps);
  Scored best;
  best.mistakes = std::numeric_limits<std::size_t>::max();
  std::optional<Halfspace> chosen;
  std::size_t index = 0;
  for (const Vector& dir : directions) {
    const auto mistakes = threshold_mistakes(select, dir, eps, m);
    for (long i = -m; i <= m; ++i, ++index) {
      const double t = static_cast<double>(i) * eps;
      const Scored cur{mistakes[static_cast<std::size_t>(i + m)], std::abs(t), index};
      if (cur.beats(best)) {
        best = cur;
        chosen = Halfspace::from_unit(dir, t);
      }
    }
  }
  const std::size_t positives = select.count(Label::positive);
  for (Label c : {Label::positive, Label::negative}) {
    const std::size_t mistakes = c == Label::positive ? select.size() - positives : positives;
    const Scored cur{mistakes, std::numeric_limits<double>::infinity(), index++};
    if (cur.beats(best)) {
      best = cur;
      chosen = Halfspace::constant(s.dim(), c);
    }
  }

  out.accepted = true;
  out.chosen = chosen;
  out.hypotheses_considered = index;
  out.selection_error = static_cast<double>(best.mistakes) / static_cast<double>(select.size());
  return out;
}

}  // namespace halftest::learner
