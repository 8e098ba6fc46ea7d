#include "halftest/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "halftest/core/linalg.hpp"

namespace halftest::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error("config: " + key + " expects a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw Error("config: " + key + " expects a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw Error("config: " + key + " expects true or false, got '" + text + "'");
}

std::string format_list(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  return os.str();
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double("list", item));
  if (out.empty()) throw Error("config: empty list");
  return out;
}

void ExperimentConfig::validate() const {
  if (d < 2) throw Error("config: d must be at least 2");
  if (n < 1) throw Error("config: n must be at least 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("config: epsilon must lie in (0,1)");
  if (!(tau > 0.0 && tau < 1.0)) throw Error("config: tau must lie in (0,1)");
  if (trials < 1) throw Error("config: trials must be at least 1");
  if (holdout < 1) throw Error("config: holdout must be at least 1");
  for (double b : budgets) {
    if (!(b >= 0.0 && b < 0.5)) throw Error("config: every budget must lie in [0, 1/2)");
  }
  for (double t : thresholds) {
    if (!std::isfinite(t)) throw Error("config: thresholds must be finite");
  }
  (void)truth_direction();
}

Vector ExperimentConfig::truth_direction() const {
  if (direction.size() >= 2 && direction[0] == 'e' &&
      direction.find(',') == std::string::npos) {
    const std::uint64_t k = parse_unsigned("direction", direction.substr(1));
    if (k < 1 || k > d) throw Error("config: direction " + direction + " out of range for d");
    return basis_vector(d, static_cast<std::size_t>(k - 1));
  }
  const std::vector<double> w = parse_list(direction);
  if (w.size() != d) throw Error("config: direction must have d entries");
  return normalized(w);
}

Halfspace ExperimentConfig::truth(double t_star) const {
  return Halfspace::from_unit(truth_direction(), -t_star);
}

void set_field(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "d") {
    c.d = parse_unsigned(key, value);
  } else if (key == "n") {
    c.n = parse_unsigned(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_double(key, value);
  } else if (key == "tau") {
    c.tau = parse_double(key, value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "marginal") {
    c.marginal = synth::Marginal::parse(trim(value));
  } else if (key == "direction") {
    c.direction = trim(value);
  } else if (key == "threshold") {
    c.thresholds = parse_list(value);
  } else if (key == "adversary") {
    c.adversary = synth::parse_adversary(trim(value));
  } else if (key == "budget") {
    c.budgets = parse_list(value);
  } else if (key == "trials") {
    c.trials = parse_unsigned(key, value);
  } else if (key == "holdout") {
    c.holdout = parse_unsigned(key, value);
  } else if (key == "timing") {
    c.timing = parse_bool(key, value);
  } else if (key == "out") {
    c.out = trim(value);
  } else {
    throw Error("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) {
      throw Error("config line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
    try {
      set_field(base, key, line.substr(eq + 1));
    } catch (const Error& e) {
      std::string_view what = e.what();
      if (what.starts_with("config: ")) what.remove_prefix(8);
      throw Error("config line " + std::to_string(number) + ": " + std::string(what));
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  return parse_config(in, std::move(base));
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "d = " << c.d << "\n"
     << "n = " << c.n << "\n"
     << "epsilon = " << c.epsilon << "\n"
     << "tau = " << c.tau << "\n"
     << "seed = " << c.seed << "\n"
     << "marginal = " << c.marginal.name() << "\n"
     << "direction = " << c.direction << "\n"
     << "threshold = " << format_list(c.thresholds) << "\n"
     << "adversary = " << synth::to_string(c.adversary) << "\n"
     << "budget = " << format_list(c.budgets) << "\n"
     << "trials = " << c.trials << "\n"
     << "holdout = " << c.holdout << "\n"
     << "timing = " << (c.timing ? "true" : "false") << "\n";
  if (!c.out.empty()) os << "out = " << c.out << "\n";
  return os.str();
}

}  // namespace halftest::cli
