#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "halftest/cli/config.hpp"

namespace halftest::cli {

struct SweepRow {
  double budget = 0.0;
  double t_star = 0.0;
  std::size_t trial = 0;
  bool accepted = false;
  double threshold = 0.0;             // chosen threshold; ±inf for constants
  std::optional<double> error;        // holdout error, accepted trials only
  std::optional<double> seconds;      // wall time, only when timing is on
  std::string diagnostic;             // rejection reason; not written to CSV
};

inline constexpr const char* kCsvHeader = "budget,t_star,trial,verdict,threshold,error,seconds";
inline constexpr const char* kSummarySchema = "halftest.sweep.v1";

/// Quotes a field when it contains a comma, quote, or line break.
std::string csv_field(const std::string& text);

/// Shortest decimal that reads back to the same double; "inf"/"-inf" for
/// infinities.
std::string format_number(double v);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Linear-interpolation quantile of a sorted sample, q ∈ [0, 1].
double quantile(const std::vector<double>& sorted, double q);

/// Per-cell acceptance rate and error quantiles, plus the fitted constant
/// c_hat = median of error/√budget over accepted trials with budget > 0.
nlohmann::json summarize(const ExperimentConfig& config, const std::vector<SweepRow>& rows);

/// Problems with a summary document; empty when it matches the schema.
std::vector<std::string> validate_summary(const nlohmann::json& summary);

}  // namespace halftest::cli
