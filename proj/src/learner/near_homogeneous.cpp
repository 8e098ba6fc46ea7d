#include "halftest/learner/near_homogeneous.hpp"

#include <algorithm>
#include <cmath>

#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"
#include "halftest/core/stats.hpp"
#include "halftest/localization/localization.hpp"
#include "halftest/testers/testers.hpp"

namespace halftest::learner {

Checked<NearHomogeneousResult> learn_near_homogeneous(const LabeledDataset& s, double epsilon,
                                                      std::uint64_t seed,
                                                      const NearHomogeneousOptions& options) {
  if (s.empty()) throw Error("learn_near_homogeneous: empty dataset");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error("learn_near_homogeneous: epsilon must lie in (0,1)");
  }

  if (auto v = testers::test_covariance(s, 2.0); !v) return v.rejection();
  const double tol = options.moment_tol > 0.0
                         ? options.moment_tol
                         : testers::default_moment_tol(options.moment_degree, s.size());
  if (auto v = testers::test_moments(s, options.moment_degree, tol); !v) return v.rejection();

  NearHomogeneousResult out;
  const Vector chow = chow_vector(s);
  out.initial_chow_norm = norm2(chow);
  if (out.initial_chow_norm < options.chow_floor) {
    return Rejection{TestKind::ChowSignal, out.initial_chow_norm, options.chow_floor,
                     "Chow vector norm"};
  }
  out.direction = normalized(chow);
  out.planned_rounds = static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-9));

  const double n = static_cast<double>(s.size());
  for (int r = 1; r <= out.planned_rounds; ++r) {
    const double sigma = std::max(std::ldexp(1.0, -r), epsilon / 4.0);
    if (n * sigma < static_cast<double>(options.min_localized)) break;

    const auto params = localization::RejectionParams::band(out.direction, sigma);
    const auto filtered = localization::reject_filter(
        s, params, derive_seed(seed, StreamRole::InnerFilter, static_cast<std::uint64_t>(r)));
    if (filtered.starved) {
      return Rejection{TestKind::Starvation, static_cast<double>(filtered.kept.size()),
                       static_cast<double>(localization::kMinSurvivors),
                       "insufficient localized mass in refinement round " + std::to_string(r)};
    }
    const LabeledDataset local = localization::to_isotropic(params, filtered.kept);

    RoundRecord rec;
    rec.round = r;
    rec.sigma = sigma;
    rec.localized = local.size();
    const auto wedge = testers::wedge_statistics(local, out.direction, options.wedge_eta);
    rec.wedge_total_variation = wedge.total_variation;
    rec.wedge_orthogonal_norm = wedge.worst_orthogonal_norm;
    if (auto v = testers::wedge_verdict(wedge, options.wedge_eta); !v) {
      Rejection rej = v.rejection();
      rej.detail += " (refinement round " + std::to_string(r) + ")";
      return rej;
    }

    const Vector local_chow = chow_vector(local);
    rec.chow_norm = norm2(local_chow);
    if (rec.chow_norm >= options.chow_floor) {
      out.direction = localization::revert_direction(normalized(local_chow), params);
      rec.applied = true;
    }
    out.rounds.push_back(rec);
    if (!rec.applied) break;
  }
  return out;
}

}  // namespace halftest::learner
