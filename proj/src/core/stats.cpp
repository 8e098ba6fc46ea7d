#include "halftest/core/stats.hpp"

namespace halftest {

namespace {

void require_nonempty(const LabeledDataset& s, const char* what) {
  if (s.empty()) throw Error(std::string(what) + ": empty dataset");
}

}  // namespace

Vector empirical_mean(const LabeledDataset& s) {
  require_nonempty(s, "empirical_mean");
  Vector m(s.dim(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) axpy(1.0, s.x(i), m);
  for (double& v : m) v /= static_cast<double>(s.size());
  return m;
}

SymmetricMatrix second_moment(const LabeledDataset& s) {
  require_nonempty(s, "second_moment");
  const std::size_t d = s.dim();
  std::vector<double> acc(d * d, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto x = s.x(i);
    for (std::size_t a = 0; a < d; ++a) {
      const double xa = x[a];
      double* row = acc.data() + a * d;
      for (std::size_t b = a; b < d; ++b) row[b] += xa * x[b];
    }
  }
  SymmetricMatrix m(d);
  const double inv_n = 1.0 / static_cast<double>(s.size());
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) m.set(a, b, acc[a * d + b] * inv_n);
  }
  return m;
}

Vector chow_vector(const LabeledDataset& s) {
  require_nonempty(s, "chow_vector");
  Vector c(s.dim(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) axpy(to_double(s.y(i)), s.x(i), c);
  for (double& v : c) v /= static_cast<double>(s.size());
  return c;
}

std::vector<double> project(const LabeledDataset& s, std::span<const double> v) {
  if (v.size() != s.dim()) throw Error("project: dimension mismatch");
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = dot(s.x(i), v);
  return out;
}

}  // namespace halftest
