#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "halftest/core/types.hpp"

namespace halftest {

enum class TestKind {
  Covariance,
  Mean,
  Kolmogorov,
  TrimmedStability,
  Moments,
  WedgeMass,
  WedgeConditionalCovariance,
  ChowSignal,
  Starvation,
  ListCap,
  NoViableCenter,
};

std::string_view to_string(TestKind kind);

struct Rejection {
  TestKind test;
  double statistic = 0.0;
  double limit = 0.0;
  std::string detail;

  /// e.g. "covariance: spectral norm = 2.31 > 2 (line 3)"
  std::string describe() const;
};

class TesterVerdict {
 public:
  static TesterVerdict accept() { return TesterVerdict(); }
  static TesterVerdict reject(TestKind test, double statistic, double limit, std::string detail);
  static TesterVerdict reject(Rejection r) { return TesterVerdict(std::move(r)); }

  bool accepted() const { return !rejection_.has_value(); }
  explicit operator bool() const { return accepted(); }
  const Rejection& rejection() const;
  /// Empty when accepted.
  std::string diagnostic() const;

 private:
  TesterVerdict() = default;
  explicit TesterVerdict(Rejection r) : rejection_(std::move(r)) {}

  std::optional<Rejection> rejection_;
};

/// A value, or the rejection that prevented computing it.
template <class T>
class Checked {
 public:
  Checked(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Checked(Rejection r) : rejection_(std::move(r)) {}  // NOLINT(google-explicit-constructor)

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!value_) throw Error("Checked::value on a rejection: " + rejection_->describe());
    return *value_;
  }
  T& value() {
    if (!value_) throw Error("Checked::value on a rejection: " + rejection_->describe());
    return *value_;
  }
  const Rejection& rejection() const {
    if (!rejection_) throw Error("Checked::rejection on a value");
    return *rejection_;
  }

 private:
  std::optional<T> value_;
  std::optional<Rejection> rejection_;
};

}  // namespace halftest
