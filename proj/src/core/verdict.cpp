#include "halftest/core/verdict.hpp"

#include <cstdio>

namespace halftest {

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::Covariance: return "covariance";
    case TestKind::Mean: return "mean";
    case TestKind::Kolmogorov: return "kolmogorov";
    case TestKind::TrimmedStability: return "trimmed-stability";
    case TestKind::Moments: return "moments";
    case TestKind::WedgeMass: return "wedge-mass";
    case TestKind::WedgeConditionalCovariance: return "wedge-conditional-covariance";
    case TestKind::ChowSignal: return "chow-signal";
    case TestKind::Starvation: return "starvation";
    case TestKind::ListCap: return "list-cap";
    case TestKind::NoViableCenter: return "no-viable-center";
  }
  return "unknown";
}

std::string Rejection::describe() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g vs limit %.6g", statistic, limit);
  std::string out(to_string(test));
  out += ": ";
  out += detail.empty() ? "statistic" : detail;
  out += " = ";
  out += buf;
  return out;
}

TesterVerdict TesterVerdict::reject(TestKind test, double statistic, double limit,
                                    std::string detail) {
  return TesterVerdict(Rejection{test, statistic, limit, std::move(detail)});
}

const Rejection& TesterVerdict::rejection() const {
  if (!rejection_) throw Error("TesterVerdict::rejection on an accepted verdict");
  return *rejection_;
}

std::string TesterVerdict::diagnostic() const {
  return rejection_ ? rejection_->describe() : std::string();
}

}  // namespace halftest
