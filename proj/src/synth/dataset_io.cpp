#include "halftest/synth/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace halftest::synth {

namespace {

std::string_view next_token(std::string_view& rest) {
  const auto start = rest.find_first_not_of(" \t\r");
  if (start == std::string_view::npos) {
    rest = {};
    return {};
  }
  rest.remove_prefix(start);
  const auto end = rest.find_first_of(" \t\r");
  const auto token = rest.substr(0, end);
  rest.remove_prefix(end == std::string_view::npos ? rest.size() : end);
  return token;
}

template <class T>
T parse_number(std::string_view token, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error("dataset line " + std::to_string(line) + ": cannot parse '" +
                std::string(token) + "'");
  }
  return value;
}

std::size_t parse_header_field(std::string_view token, std::string_view key) {
  if (token.substr(0, key.size()) != key) {
    throw Error("dataset header: expected '" + std::string(key) + "<int>'");
  }
  const auto value = parse_number<long long>(token.substr(key.size()), 1);
  if (value < 0) throw Error("dataset header: negative size");
  return static_cast<std::size_t>(value);
}

}  // namespace

void write_dataset(std::ostream& out, const LabeledDataset& s) {
  out << "d=" << s.dim() << " n=" << s.size() << '\n';
  std::string line;
  char buf[32];
  for (std::size_t i = 0; i < s.size(); ++i) {
    line.clear();
    for (double v : s.x(i)) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
      line.append(buf, res.ptr);
      line.push_back(' ');
    }
    line += s.y(i) == Label::positive ? "+1\n" : "-1\n";
    out << line;
  }
}

void write_dataset(const std::string& path, const LabeledDataset& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_dataset(out, s);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

LabeledDataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("dataset: missing header");
  std::string_view rest = line;
  const std::size_t d = parse_header_field(next_token(rest), "d=");
  const std::size_t n = parse_header_field(next_token(rest), "n=");
  if (!next_token(rest).empty()) throw Error("dataset header: trailing content");
  if (d == 0) throw Error("dataset header: d must be positive");

  std::vector<double> features;
  std::vector<Label> labels;
  features.reserve(n * d);
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lineno = i + 2;
    if (!std::getline(in, line)) {
      throw Error("dataset truncated: expected " + std::to_string(n) + " points, found " +
                  std::to_string(i));
    }
    rest = line;
    for (std::size_t j = 0; j < d; ++j) {
      const auto token = next_token(rest);
      if (token.empty()) throw Error("dataset line " + std::to_string(lineno) + ": too few values");
      features.push_back(parse_number<double>(token, lineno));
    }
    const auto label = next_token(rest);
    if (label == "+1") {
      labels.push_back(Label::positive);
    } else if (label == "-1") {
      labels.push_back(Label::negative);
    } else {
      throw Error("dataset line " + std::to_string(lineno) + ": label must be +1 or -1");
    }
    if (!next_token(rest).empty()) {
      throw Error("dataset line " + std::to_string(lineno) + ": trailing content");
    }
  }
  while (std::getline(in, line)) {
    std::string_view tail = line;
    if (!next_token(tail).empty()) throw Error("dataset: more points than the header declares");
  }
  return LabeledDataset(d, std::move(features), std::move(labels));
}

LabeledDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_dataset(in);
}

}  // namespace halftest::synth
