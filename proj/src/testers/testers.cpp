#include "halftest/testers/testers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "halftest/core/gaussian.hpp"
#include "halftest/core/linalg.hpp"
#include "halftest/core/stats.hpp"

namespace halftest::testers {

namespace {

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

void require_nonempty(std::size_t n, const char* what) {
  if (n == 0) throw Error(std::string(what) + ": empty input");
}

}  // namespace

TesterVerdict test_covariance(const LabeledDataset& s, double bound) {
  require_nonempty(s.size(), "test_covariance");
  const double norm = spectral_upper(second_moment(s));
  if (norm <= bound) return TesterVerdict::accept();
  return TesterVerdict::reject(TestKind::Covariance, norm, bound, "second-moment spectral norm");
}

TesterVerdict test_mean(const LabeledDataset& s, double epsilon) {
  require_nonempty(s.size(), "test_mean");
  const double norm = norm2(empirical_mean(s));
  if (norm < epsilon) return TesterVerdict::accept();
  return TesterVerdict::reject(TestKind::Mean, norm, epsilon, "mean norm");
}

double ks_statistic(std::span<const double> sorted) {
  require_nonempty(sorted.size(), "ks_statistic");
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    if (i > 0 && sorted[i] < sorted[i - 1]) throw Error("ks_statistic: values are not sorted");
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double tail = gaussian_tail(sorted[i]);
    const double at_or_above = static_cast<double>(sorted.size() - i) / n;  // t → value⁻
    const double above = static_cast<double>(sorted.size() - j) / n;        // t = value
    worst = std::max({worst, std::abs(at_or_above - tail), std::abs(above - tail)});
    i = j;
  }
  return worst;
}

TesterVerdict ks_test(std::span<const double> sorted, double epsilon) {
  const double stat = ks_statistic(sorted);
  if (stat <= epsilon) return TesterVerdict::accept();
  return TesterVerdict::reject(TestKind::Kolmogorov, stat, epsilon, "Kolmogorov distance");
}

double trimmed_mean_shift(std::span<const double> values, double epsilon) {
  require_nonempty(values.size(), "trimmed_mean_shift");
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw Error("trimmed stability: epsilon must lie in (0, 1/2)");
  const std::size_t n = values.size();
  const auto k = static_cast<std::size_t>(std::floor(epsilon * static_cast<double>(n)));
  if (k == 0) return 0.0;

  std::vector<double> v(values.begin(), values.end());
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  const double mean = total / static_cast<double>(n);
  const double rest = static_cast<double>(n - k);

  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  const double low_sum = std::accumulate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n - k), v.end());
  const double high_sum =
      std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(n - k), v.end(), 0.0);

  const double without_high = (total - high_sum) / rest;
  const double without_low = (total - low_sum) / rest;
  return std::max(std::abs(without_high - mean), std::abs(without_low - mean));
}

TesterVerdict test_trimmed_stability(std::span<const double> values, double epsilon) {
  const double shift = trimmed_mean_shift(values, epsilon);
  const double limit = kStabilityConstant * epsilon * std::sqrt(std::log(1.0 / epsilon));
  if (shift <= limit) return TesterVerdict::accept();
  return TesterVerdict::reject(TestKind::TrimmedStability, shift, limit, "trimmed mean shift");
}

std::size_t monomial_count(std::size_t d, int k) {
  // C(d + k, k) − 1, stopping early once past the guard.
  double c = 1.0;
  for (int j = 1; j <= k; ++j) {
    c = c * static_cast<double>(d + static_cast<std::size_t>(j)) / j;
    if (c > 1e15) return static_cast<std::size_t>(1e15);
  }
  return static_cast<std::size_t>(std::llround(c)) - 1;
}

double gaussian_moment(int p) {
  if (p < 0) throw Error("gaussian_moment: negative degree");
  if (p % 2 == 1) return 0.0;
  double m = 1.0;
  for (int j = p - 1; j > 1; j -= 2) m *= j;
  return m;
}

double default_moment_tol(int k, std::size_t n) {
  require_nonempty(n, "default_moment_tol");
  return 10.0 * std::sqrt(gaussian_moment(2 * k)) / std::sqrt(static_cast<double>(n));
}

namespace {

constexpr std::size_t kBlock = 256;

struct MomentWalker {
  std::size_t d;
  int k;
  std::size_t block_size = 0;
  const double* columns = nullptr;  // d × kBlock, column j contiguous
  std::vector<std::vector<double>> products;  // one buffer per depth
  std::vector<double> sums;  // one per monomial, in walk order
  std::size_t slot = 0;

  void walk(int depth, std::size_t first) {
    const std::size_t len = block_size;
    double* buf = products[static_cast<std::size_t>(depth)].data();
    const double* prev = depth > 0 ? products[static_cast<std::size_t>(depth - 1)].data() : nullptr;
    for (std::size_t i = first; i < d; ++i) {
      const double* col = columns + i * kBlock;
      // Four independent partial sums keep the reduction pipelined.
      double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
      std::size_t b = 0;
      if (prev) {
        for (; b + 4 <= len; b += 4) {
          a0 += buf[b] = prev[b] * col[b];
          a1 += buf[b + 1] = prev[b + 1] * col[b + 1];
          a2 += buf[b + 2] = prev[b + 2] * col[b + 2];
          a3 += buf[b + 3] = prev[b + 3] * col[b + 3];
        }
        for (; b < len; ++b) a0 += buf[b] = prev[b] * col[b];
      } else {
        for (; b + 4 <= len; b += 4) {
          a0 += buf[b] = col[b];
          a1 += buf[b + 1] = col[b + 1];
          a2 += buf[b + 2] = col[b + 2];
          a3 += buf[b + 3] = col[b + 3];
        }
        for (; b < len; ++b) a0 += buf[b] = col[b];
      }
      sums[slot++] += (a0 + a1) + (a2 + a3);
      if (depth + 1 < k) walk(depth + 1, i);
    }
  }
};

// Visits index tuples in the same order as MomentWalker::walk.
void enumerate(std::size_t d, int k, int depth, std::size_t first, std::vector<int>& tuple,
               std::vector<std::vector<int>>& out) {
  for (std::size_t i = first; i < d; ++i) {
    tuple.push_back(static_cast<int>(i));
    out.push_back(tuple);
    if (depth + 1 < k) enumerate(d, k, depth + 1, i, tuple, out);
    tuple.pop_back();
  }
}

double gaussian_monomial(const std::vector<int>& tuple) {
  double m = 1.0;
  std::size_t i = 0;
  while (i < tuple.size()) {
    std::size_t j = i;
    while (j < tuple.size() && tuple[j] == tuple[i]) ++j;
    m *= gaussian_moment(static_cast<int>(j - i));
    if (m == 0.0) return 0.0;
    i = j;
  }
  return m;
}

}  // namespace

MomentReport moment_deviation(const LabeledDataset& s, int k) {
  require_nonempty(s.size(), "test_moments");
  if (k < 2) throw Error("test_moments: degree must be at least 2");
  const std::size_t d = s.dim();
  const std::size_t count = monomial_count(d, k);
  if (count > kMaxMonomials) {
    throw Error("test_moments: " + std::to_string(count) + " monomials of degree <= " +
                std::to_string(k) + " in dimension " + std::to_string(d) + " exceed the limit");
  }

  MomentWalker walker;
  walker.d = d;
  walker.k = k;
  walker.products.assign(static_cast<std::size_t>(k), std::vector<double>(kBlock));
  walker.sums.assign(count, 0.0);
  std::vector<double> columns(d * kBlock);
  walker.columns = columns.data();
  for (std::size_t start = 0; start < s.size(); start += kBlock) {
    const std::size_t len = std::min(kBlock, s.size() - start);
    for (std::size_t b = 0; b < len; ++b) {
      const auto x = s.x(start + b);
      for (std::size_t i = 0; i < d; ++i) columns[i * kBlock + b] = x[i];
    }
    walker.block_size = len;
    walker.slot = 0;
    walker.walk(0, 0);
  }

  std::vector<std::vector<int>> tuples;
  std::vector<int> scratch;
  enumerate(d, k, 0, 0, scratch, tuples);

  MomentReport report;
  const double n = static_cast<double>(s.size());
  for (std::size_t m = 0; m < count; ++m) {
    const double dev = std::abs(walker.sums[m] / n - gaussian_monomial(tuples[m]));
    if (dev > report.worst_deviation || report.worst_index.empty()) {
      report.worst_deviation = dev;
      report.worst_index = tuples[m];
    }
  }
  return report;
}

TesterVerdict test_moments(const LabeledDataset& s, int k, double moment_tol) {
  if (!(moment_tol > 0.0)) throw Error("test_moments: tolerance must be positive");
  const MomentReport r = moment_deviation(s, k);
  if (r.worst_deviation <= moment_tol) return TesterVerdict::accept();
  std::string which = "moment deviation at x";
  for (std::size_t i = 0; i < r.worst_index.size(); ++i) {
    which += (i ? "*x" : "") + std::to_string(r.worst_index[i] + 1);
  }
  return TesterVerdict::reject(TestKind::Moments, r.worst_deviation, moment_tol, which);
}

WedgeWorkspace::WedgeWorkspace(const LabeledDataset& s)
    : data_(s), packed_(s.dim() * (s.dim() + 1) / 2), outer_(s.size() * packed_) {
  const std::size_t d = s.dim();
  for (std::size_t p = 0; p < s.size(); ++p) {
    const auto x = s.x(p);
    double* o = outer_.data() + p * packed_;
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t c = a; c < d; ++c) *o++ = x[a] * x[c];
    }
  }
}

WedgeStatistics WedgeWorkspace::statistics(std::span<const double> v, double eta) const {
  const LabeledDataset& s = data_;
  require_nonempty(s.size(), "wedge_bound_test");
  if (!(eta > 0.0 && eta < 0.5)) throw Error("wedge_bound_test: eta must lie in (0, 1/2)");
  if (v.size() != s.dim()) throw Error("wedge_bound_test: dimension mismatch");
  if (std::abs(norm2(v) - 1.0) > 1e-9) throw Error("wedge_bound_test: direction must be unit");

  const std::size_t d = s.dim();
  WedgeStatistics st;
  const long long b = static_cast<long long>(std::ceil(std::sqrt(std::log(1.0 / eta)) / eta));
  st.half_bands = b;
  const long long lowest = -b - 1;
  const double edge = static_cast<double>(b + 1) * eta;
  const std::size_t n_events = static_cast<std::size_t>(2 * b + 4);

  st.events.resize(n_events);
  st.events.front().lo = -INFINITY;
  st.events.front().hi = -edge;
  st.events.back().lo = edge;
  st.events.back().hi = INFINITY;
  for (long long i = lowest; i <= b; ++i) {
    auto& e = st.events[static_cast<std::size_t>(i - lowest + 1)];
    e.lo = static_cast<double>(i) * eta;
    e.hi = static_cast<double>(i + 1) * eta;
  }
  for (auto& e : st.events) e.gaussian_mass = gaussian_interval(e.lo, e.hi);

  std::vector<double> sums(n_events * packed_, 0.0);
  const double* vp = v.data();
  for (std::size_t p = 0; p < s.size(); ++p) {
    const double* x = s.x(p).data();
    double proj = 0.0;
    for (std::size_t a = 0; a < d; ++a) proj += x[a] * vp[a];
    std::size_t idx;
    if (proj < -edge) {
      idx = 0;
    } else if (proj >= edge) {
      idx = n_events - 1;
    } else {
      const long long band = std::clamp(static_cast<long long>(std::floor(proj / eta)), lowest, b);
      idx = static_cast<std::size_t>(band - lowest + 1);
    }
    ++st.events[idx].count;
    const double* o = outer_.data() + p * packed_;
    double* acc = sums.data() + idx * packed_;
    for (std::size_t q = 0; q < packed_; ++q) acc[q] += o[q];
  }

  const double n = static_cast<double>(s.size());
  const std::size_t min_count = std::max<std::size_t>(20, d);
  std::vector<double> full(d * d);
  Vector mv(d);
  for (std::size_t e = 0; e < n_events; ++e) {
    auto& ev = st.events[e];
    st.total_variation += std::abs(static_cast<double>(ev.count) / n - ev.gaussian_mass);
    if (ev.count < min_count) continue;
    const double* acc = sums.data() + e * packed_;
    for (std::size_t a = 0, q = 0; a < d; ++a) {
      for (std::size_t c = a; c < d; ++c, ++q) {
        full[a * d + c] = acc[q];
        full[c * d + a] = acc[q];
      }
    }
    // (I − vvᵀ) M (I − vvᵀ) = M − v(Mv)ᵀ − (Mv)vᵀ + (vᵀMv) vvᵀ
    double vmv = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      double t = 0.0;
      for (std::size_t c = 0; c < d; ++c) t += full[a * d + c] * vp[c];
      mv[a] = t;
      vmv += vp[a] * t;
    }
    SymmetricMatrix m(d);
    const double inv = 1.0 / static_cast<double>(ev.count);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t c = a; c < d; ++c) {
        const double val = full[a * d + c] - vp[a] * mv[c] - mv[a] * vp[c] + vmv * vp[a] * vp[c];
        m.set(a, c, val * inv);
      }
    }
    ev.orthogonal_norm = spectral_upper(m);
    if (ev.orthogonal_norm > st.worst_orthogonal_norm) {
      st.worst_orthogonal_norm = ev.orthogonal_norm;
      st.worst_event = e;
    }
  }
  return st;
}

WedgeStatistics wedge_statistics(const LabeledDataset& s, std::span<const double> v, double eta) {
  return WedgeWorkspace(s).statistics(v, eta);
}

TesterVerdict wedge_verdict(const WedgeStatistics& st, double eta) {
  if (st.total_variation > eta) {
    return TesterVerdict::reject(TestKind::WedgeMass, st.total_variation, eta,
                                 "band-mass total variation");
  }
  if (st.worst_orthogonal_norm > 2.0) {
    const auto& e = st.events[st.worst_event];
    return TesterVerdict::reject(
        TestKind::WedgeConditionalCovariance, st.worst_orthogonal_norm, 2.0,
        "orthogonal second-moment norm in band [" + fmt("%.4g", e.lo) + ", " + fmt("%.4g", e.hi) +
            ")");
  }
  return TesterVerdict::accept();
}

TesterVerdict wedge_bound_test(const LabeledDataset& s, std::span<const double> v, double eta) {
  return wedge_verdict(wedge_statistics(s, v, eta), eta);
}

}  // namespace halftest::testers
