#include "halftest/centers/centers.hpp"

#include <algorithm>
#include <cmath>

#include "halftest/core/gaussian.hpp"
#include "halftest/core/linalg.hpp"
#include "halftest/core/stats.hpp"
#include "halftest/testers/testers.hpp"

namespace halftest::centers {

namespace {

void append_ray(std::vector<CenterCandidate>& out, const Vector& unit, double spacing,
                long last, CenterSource source) {
  for (long i = 0; i <= last; ++i) {
    Vector p = unit;
    const double r = static_cast<double>(i) * spacing;
    for (double& c : p) c *= r;
    out.push_back({std::move(p), source, i});
  }
}

CenterCandidate origin(std::size_t d, CenterSource source) {
  return {Vector(d, 0.0), source, 0};
}

Rejection annotate(Rejection r, const char* where) {
  r.detail += where;
  return r;
}

}  // namespace

std::string_view to_string(CenterSource s) {
  switch (s) {
    case CenterSource::TailMeanPlus: return "tail-mean-plus";
    case CenterSource::TailMeanMinus: return "tail-mean-minus";
    case CenterSource::ChowPath: return "chow-path";
  }
  return "unknown";
}

const Vector& CenterList::ray(CenterSource source) const {
  switch (source) {
    case CenterSource::TailMeanPlus: return ray_plus;
    case CenterSource::TailMeanMinus: return ray_minus;
    case CenterSource::ChowPath: return ray_chow;
  }
  return ray_chow;
}

std::optional<TailStats> tail_mean(const LabeledDataset& s, Label label) {
  TailStats st;
  st.tail_label = label;
  st.tail_mean.assign(s.dim(), 0.0);
  std::size_t positives = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.y(i) == Label::positive) ++positives;
    if (s.y(i) != label) continue;
    ++st.count;
    axpy(1.0, s.x(i), st.tail_mean);
  }
  if (st.count == 0) return std::nullopt;
  for (double& v : st.tail_mean) v /= static_cast<double>(st.count);
  const double n = static_cast<double>(s.size());
  const double pos = static_cast<double>(positives);
  st.minority_mass = std::min(pos, n - pos) / n;
  return st;
}

Checked<CenterList> chow_center_search(const LabeledDataset& s, double epsilon,
                                       const MomentCheck& moments) {
  if (s.empty()) throw Error("chow_center_search: empty dataset");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error("chow_center_search: epsilon must lie in (0,1)");
  }
  const double tol = moments.tolerance > 0.0
                         ? moments.tolerance
                         : testers::default_moment_tol(moments.degree, s.size());
  if (auto v = testers::test_moments(s, moments.degree, tol); !v) {
    return annotate(v.rejection(), " (Chow path)");
  }

  CenterList out;
  const Vector chow = chow_vector(s);
  out.chow_norm = norm2(chow);
  if (out.chow_norm < epsilon) {
    out.candidates.push_back(origin(s.dim(), CenterSource::ChowPath));
    return out;
  }
  const double spacing = epsilon * epsilon;
  const auto last = static_cast<long>(std::ceil(10.0 / spacing - 1e-9));
  out.ray_chow = normalized(chow);
  append_ray(out.candidates, out.ray_chow, spacing, last, CenterSource::ChowPath);
  return out;
}

std::size_t tail_grid_cap(double minority_mass, double epsilon) {
  if (!(minority_mass > 0.0 && minority_mass < 1.0)) {
    throw Error("tail_grid_cap: minority mass must lie in (0,1)");
  }
  const double log_inv = std::log(1.0 / minority_mass);
  const double e2 = epsilon * epsilon;
  return static_cast<std::size_t>(std::ceil(2.0 * log_inv / e2) +
                                  std::ceil(1.0 / (e2 * std::sqrt(log_inv)))) +
         1;
}

Checked<CenterList> find_centers(const LabeledDataset& s, const CenterSearchOptions& options) {
  if (s.empty()) throw Error("find_centers: empty dataset");
  const double eps = options.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw Error("find_centers: epsilon must lie in (0,1)");

  const std::size_t positives = s.count(Label::positive);
  const std::size_t minority = std::min(positives, s.size() - positives);
  const double minority_mass = static_cast<double>(minority) / static_cast<double>(s.size());

  if (minority < options.min_tail_points) {
    auto chow = chow_center_search(s, eps, options.moments);
    if (!chow) return chow.rejection();
    CenterList out = std::move(chow.value());
    out.minority_mass = minority_mass;
    out.tail_passes_skipped = true;
    return out;
  }

  if (auto v = testers::test_covariance(s, 2.0); !v) {
    return annotate(v.rejection(), " (center search)");
  }
  if (auto v = testers::test_mean(s, eps); !v) {
    return annotate(v.rejection(), " (center search)");
  }

  CenterList out;
  out.minority_mass = minority_mass;
  out.per_pass_cap = tail_grid_cap(minority_mass, eps);
  const double spacing = eps * eps;
  const double reach = 1.0 / std::sqrt(std::log(1.0 / minority_mass));

  for (Label label : {Label::positive, Label::negative}) {
    const bool plus = label == Label::positive;
    const CenterSource source = plus ? CenterSource::TailMeanPlus : CenterSource::TailMeanMinus;
    const char* where = plus ? " (projection on +1 tail mean)" : " (projection on -1 tail mean)";
    const TailStats st = *tail_mean(s, label);
    const double mu_norm = norm2(st.tail_mean);
    (plus ? out.tail_norm_plus : out.tail_norm_minus) = mu_norm;
    if (mu_norm < spacing) {
      out.candidates.push_back(origin(s.dim(), source));
      continue;
    }
    const Vector direction = normalized(st.tail_mean);
    std::vector<double> proj = project(s, direction);
    std::sort(proj.begin(), proj.end());
    if (auto v = testers::ks_test(proj, eps); !v) return annotate(v.rejection(), where);
    if (auto v = testers::test_trimmed_stability(proj, eps); !v) {
      return annotate(v.rejection(), where);
    }
    const auto last = static_cast<long>(std::ceil((mu_norm + reach) / spacing - 1e-9));
    if (static_cast<std::size_t>(last) + 1 > out.per_pass_cap) {
      return Rejection{TestKind::ListCap, static_cast<double>(last + 1),
                       static_cast<double>(out.per_pass_cap),
                       std::string("tail-mean grid length") + where};
    }
    append_ray(out.candidates, direction, spacing, last, source);
    (plus ? out.ray_plus : out.ray_minus) = direction;
  }

  auto chow = chow_center_search(s, eps, options.moments);
  if (!chow) return chow.rejection();
  out.chow_norm = chow.value().chow_norm;
  out.ray_chow = chow.value().ray_chow;
  for (auto& c : chow.value().candidates) out.candidates.push_back(std::move(c));
  return out;
}

CenterQuality center_quality(const CenterCandidate& c, const Halfspace& truth) {
  if (truth.is_constant()) throw Error("center_quality: constant truth");
  return {std::abs(dot(truth.direction(), c.point) + truth.threshold()),
          gaussian_tail(norm2(c.point))};
}

}  // namespace halftest::centers
