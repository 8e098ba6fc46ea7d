#include "halftest/cli/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>

namespace halftest::cli {

using nlohmann::json;

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << "\r\n";
  for (const auto& r : rows) {
    out << csv_field(format_number(r.budget)) << ',' << csv_field(format_number(r.t_star)) << ','
        << r.trial << ',' << (r.accepted ? "accept" : "reject") << ','
        << (r.accepted ? format_number(r.threshold) : "") << ','
        << (r.error ? format_number(*r.error) : "") << ','
        << (r.seconds ? format_number(*r.seconds) : "") << "\r\n";
  }
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

namespace {

json optional_number(const std::vector<double>& sorted, double q) {
  return sorted.empty() ? json(nullptr) : json(quantile(sorted, q));
}

}  // namespace

json summarize(const ExperimentConfig& config, const std::vector<SweepRow>& rows) {
  json doc;
  doc["schema"] = kSummarySchema;
  doc["config"] = {
      {"d", config.d},
      {"n", config.n},
      {"epsilon", config.epsilon},
      {"tau", config.tau},
      {"seed", config.seed},
      {"marginal", config.marginal.name()},
      {"direction", config.direction},
      {"adversary", std::string(synth::to_string(config.adversary))},
      {"trials", config.trials},
      {"holdout", config.holdout},
  };

  // Cells in first-appearance order, which is the sweep order.
  std::vector<std::pair<double, double>> order;
  std::map<std::pair<double, double>, std::vector<const SweepRow*>> cells;
  for (const auto& r : rows) {
    auto key = std::make_pair(r.budget, r.t_star);
    if (!cells.count(key)) order.push_back(key);
    cells[key].push_back(&r);
  }

  json cell_list = json::array();
  std::size_t accepted_total = 0;
  std::vector<double> ratios;
  for (const auto& key : order) {
    const auto& members = cells[key];
    std::vector<double> errors;
    std::size_t accepted = 0;
    std::size_t within = 0;
    const double bound = 10.0 * std::sqrt(key.first) + config.epsilon;
    for (const SweepRow* r : members) {
      if (!r->accepted) continue;
      ++accepted;
      if (r->error) {
        errors.push_back(*r->error);
        if (*r->error <= bound) ++within;
        if (key.first > 0.0) ratios.push_back(*r->error / std::sqrt(key.first));
      }
    }
    accepted_total += accepted;
    std::sort(errors.begin(), errors.end());
    cell_list.push_back({
        {"budget", key.first},
        {"t_star", key.second},
        {"trials", members.size()},
        {"accepted", accepted},
        {"acceptance_rate", static_cast<double>(accepted) / static_cast<double>(members.size())},
        {"median_error", optional_number(errors, 0.5)},
        {"error_quantiles",
         {{"q10", optional_number(errors, 0.1)},
          {"q50", optional_number(errors, 0.5)},
          {"q90", optional_number(errors, 0.9)}}},
        {"max_error", errors.empty() ? json(nullptr) : json(errors.back())},
        {"error_bound", bound},
        {"within_bound", within},
    });
  }
  std::sort(ratios.begin(), ratios.end());
  doc["cells"] = cell_list;
  doc["rows"] = rows.size();
  doc["acceptance_rate"] =
      rows.empty() ? 0.0 : static_cast<double>(accepted_total) / static_cast<double>(rows.size());
  doc["c_hat"] = ratios.empty() ? json(nullptr) : json(quantile(ratios, 0.5));
  return doc;
}

namespace {

void need(std::vector<std::string>& problems, const json& obj, const char* key,
          bool (json::*is_type)() const noexcept, const char* type, bool nullable = false) {
  if (!obj.is_object() || !obj.contains(key)) {
    problems.push_back(std::string("missing field '") + key + "'");
    return;
  }
  const json& v = obj.at(key);
  if (nullable && v.is_null()) return;
  if (!(v.*is_type)()) problems.push_back(std::string("field '") + key + "' must be " + type);
}

void need_fraction(std::vector<std::string>& problems, const json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) return;  // reported by need()
  const double v = obj.at(key).get<double>();
  if (!(v >= 0.0 && v <= 1.0)) {
    problems.push_back(std::string("field '") + key + "' must lie in [0, 1]");
  }
}

}  // namespace

std::vector<std::string> validate_summary(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"summary must be a JSON object"};
  need(problems, doc, "schema", &json::is_string, "a string");
  if (doc.contains("schema") && doc["schema"] != kSummarySchema) {
    problems.push_back(std::string("schema must be ") + kSummarySchema);
  }
  need(problems, doc, "config", &json::is_object, "an object");
  need(problems, doc, "cells", &json::is_array, "an array");
  need(problems, doc, "rows", &json::is_number_unsigned, "a non-negative integer");
  need(problems, doc, "acceptance_rate", &json::is_number, "a number");
  need(problems, doc, "c_hat", &json::is_number, "a number or null", true);
  need_fraction(problems, doc, "acceptance_rate");
  if (doc.contains("config") && doc["config"].is_object()) {
    for (const char* key : {"d", "n", "seed", "trials", "holdout"}) {
      need(problems, doc["config"], key, &json::is_number_unsigned, "a non-negative integer");
    }
    for (const char* key : {"epsilon", "tau"}) {
      need(problems, doc["config"], key, &json::is_number, "a number");
    }
    for (const char* key : {"marginal", "direction", "adversary"}) {
      need(problems, doc["config"], key, &json::is_string, "a string");
    }
  }
  if (!problems.empty() || !doc["cells"].is_array()) return problems;

  std::size_t trial_total = 0;
  for (const json& cell : doc["cells"]) {
    const std::size_t before = problems.size();
    need(problems, cell, "budget", &json::is_number, "a number");
    need(problems, cell, "t_star", &json::is_number, "a number");
    need(problems, cell, "trials", &json::is_number_unsigned, "a non-negative integer");
    need(problems, cell, "accepted", &json::is_number_unsigned, "a non-negative integer");
    need(problems, cell, "within_bound", &json::is_number_unsigned, "a non-negative integer");
    need(problems, cell, "acceptance_rate", &json::is_number, "a number");
    need(problems, cell, "median_error", &json::is_number, "a number or null", true);
    need(problems, cell, "max_error", &json::is_number, "a number or null", true);
    need(problems, cell, "error_bound", &json::is_number, "a number");
    need(problems, cell, "error_quantiles", &json::is_object, "an object");
    if (problems.size() != before) continue;
    need_fraction(problems, cell, "acceptance_rate");
    need_fraction(problems, cell, "median_error");
    need_fraction(problems, cell, "max_error");
    for (const char* q : {"q10", "q50", "q90"}) {
      need(problems, cell["error_quantiles"], q, &json::is_number, "a number or null", true);
      need_fraction(problems, cell["error_quantiles"], q);
    }
    const auto trials = cell["trials"].get<std::size_t>();
    if (cell["accepted"].get<std::size_t>() > trials) {
      problems.push_back("cell accepts more trials than it ran");
    }
    trial_total += trials;
  }
  if (problems.empty() && trial_total != doc["rows"].get<std::size_t>()) {
    problems.push_back("rows does not equal the sum of cell trials");
  }
  return problems;
}

}  // namespace halftest::cli
