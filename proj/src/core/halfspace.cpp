#include "halftest/core/halfspace.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "halftest/core/linalg.hpp"

namespace halftest {

Halfspace::Halfspace(Vector direction, double threshold)
    : direction_(std::move(direction)), threshold_(threshold) {}

Halfspace Halfspace::from_unit(Vector direction, double threshold) {
  const double n = norm2(direction);
  if (!(std::abs(n - 1.0) <= 1e-9)) {
    throw Error("halfspace direction must be unit, got norm " + std::to_string(n));
  }
  if (std::isnan(threshold)) throw Error("halfspace threshold is NaN");
  return Halfspace(std::move(direction), threshold);
}

Halfspace Halfspace::normalized(std::span<const double> w, double b) {
  const double n = norm2(w);
  if (!(n >= 1e-12)) throw Error("halfspace: normal vector norm below 1e-12");
  Vector v(w.begin(), w.end());
  for (double& c : v) c /= n;
  return from_unit(std::move(v), b / n);
}

Halfspace Halfspace::constant(std::size_t dim, Label label) {
  const double inf = std::numeric_limits<double>::infinity();
  return Halfspace(basis_vector(dim, 0), label == Label::positive ? inf : -inf);
}

bool Halfspace::is_constant() const { return std::isinf(threshold_); }

double Halfspace::margin(std::span<const double> x) const {
  if (x.size() != direction_.size()) {
    throw Error("evaluate: point dimension " + std::to_string(x.size()) +
                " does not match halfspace dimension " + std::to_string(direction_.size()));
  }
  if (is_constant()) return threshold_;
  return dot(direction_, x) + threshold_;
}

Halfspace Halfspace::negated() const {
  Vector v = direction_;
  for (double& c : v) c = -c;
  return Halfspace(std::move(v), -threshold_);
}

Label evaluate(const Halfspace& h, std::span<const double> x) {
  return h.margin(x) >= 0.0 ? Label::positive : Label::negative;
}

double empirical_error(const Halfspace& h, const LabeledDataset& s) {
  if (s.empty()) throw Error("empirical_error: empty dataset");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (evaluate(h, s.x(i)) != s.y(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(s.size());
}

}  // namespace halftest
