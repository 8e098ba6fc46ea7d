#include "halftest/synth/generate.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <numeric>

#include "halftest/core/rng.hpp"

namespace halftest::synth {

namespace {

double parse_parameter(std::string_view text, std::string_view whole) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(value > 0.0) ||
      !std::isfinite(value)) {
    throw Error("invalid marginal parameter in '" + std::string(whole) + "'");
  }
  return value;
}

void fill_point(const Marginal& m, NormalStream& rng, std::span<double> x) {
  switch (m.kind) {
    case Marginal::Kind::StandardGaussian:
      rng.fill_normal(x);
      return;
    case Marginal::Kind::ScaledGaussian:
      rng.fill_normal(x);
      for (double& v : x) v *= m.parameter;
      return;
    case Marginal::Kind::TwoPointMixture: {
      const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
      rng.fill_normal(x);
      x[0] = (side * m.parameter + x[0]) / std::sqrt(1.0 + m.parameter * m.parameter);
      return;
    }
    case Marginal::Kind::UniformCube:
      for (double& v : x) v = m.parameter * (2.0 * rng.uniform() - 1.0);
      return;
  }
}

// Indices of the k entries with the largest key; ties broken by index so the
// chosen set is a pure function of the keys.
std::vector<std::size_t> top_k(std::vector<std::size_t> pool, const std::vector<double>& key,
                               std::size_t k) {
  k = std::min(k, pool.size());
  auto before = [&](std::size_t a, std::size_t b) {
    return key[a] != key[b] ? key[a] > key[b] : a < b;
  };
  std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                   before);
  pool.resize(k);
  return pool;
}

}  // namespace

Marginal Marginal::parse(std::string_view text) {
  if (text == "gaussian") return standard_gaussian();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error("unknown marginal '" + std::string(text) + "'");
  const auto kind = text.substr(0, colon);
  const double p = parse_parameter(text.substr(colon + 1), text);
  if (kind == "scaled") return scaled_gaussian(p);
  if (kind == "mixture") return two_point_mixture(p);
  if (kind == "cube") return uniform_cube(p);
  throw Error("unknown marginal '" + std::string(text) + "'");
}

std::string Marginal::name() const {
  char buf[64];
  switch (kind) {
    case Kind::StandardGaussian: return "gaussian";
    case Kind::ScaledGaussian: std::snprintf(buf, sizeof buf, "scaled:%.17g", parameter); break;
    case Kind::TwoPointMixture: std::snprintf(buf, sizeof buf, "mixture:%.17g", parameter); break;
    case Kind::UniformCube: std::snprintf(buf, sizeof buf, "cube:%.17g", parameter); break;
  }
  return buf;
}

Adversary parse_adversary(std::string_view text) {
  if (text == "boundary") return Adversary::BoundaryFlip;
  if (text == "tail") return Adversary::TailFlip;
  if (text == "random") return Adversary::RandomFlip;
  throw Error("unknown adversary '" + std::string(text) + "' (boundary, tail, random)");
}

std::string_view to_string(Adversary a) {
  switch (a) {
    case Adversary::BoundaryFlip: return "boundary";
    case Adversary::TailFlip: return "tail";
    case Adversary::RandomFlip: return "random";
  }
  return "unknown";
}

std::size_t flip_count(double budget, std::size_t n) {
  return static_cast<std::size_t>(std::floor(budget * static_cast<double>(n) + 1e-9));
}

Generated generate(std::size_t d, std::size_t n, const Marginal& marginal, const Halfspace& truth,
                   const NoiseProfile& noise, std::uint64_t seed) {
  if (n < 1) throw Error("generate: n must be at least 1");
  if (d < 2) throw Error("generate: d must be at least 2");
  if (truth.dim() != d) throw Error("generate: truth dimension differs from d");
  if (!(noise.budget >= 0.0)) throw Error("generate: negative noise budget");
  if (!(noise.budget < 0.5)) throw Error("generate: noise budget must be below 1/2");
  if (marginal.kind != Marginal::Kind::StandardGaussian && !(marginal.parameter > 0.0)) {
    throw Error("generate: marginal parameter must be positive");
  }

  std::vector<double> features(n * d);
  std::vector<Label> labels(n);
  std::vector<double> margin(n);
  NormalStream rng(derive_seed(seed, StreamRole::Features));
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> x(features.data() + i * d, d);
    fill_point(marginal, rng, x);
    margin[i] = truth.margin(x);
    labels[i] = margin[i] >= 0.0 ? Label::positive : Label::negative;
  }

  Generated out{LabeledDataset(d), flip_count(noise.budget, n), 0, false};
  const std::size_t k = out.requested_flips;
  std::vector<std::size_t> chosen;
  if (k > 0) {
    switch (noise.strategy) {
      case Adversary::BoundaryFlip: {
        std::vector<double> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = -std::abs(margin[i]);
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        chosen = top_k(std::move(all), key, k);
        break;
      }
      case Adversary::TailFlip: {
        const auto positives =
            static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::positive));
        const Label minority = positives <= n - positives ? Label::positive : Label::negative;
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < n; ++i) {
          if (labels[i] == minority) pool.push_back(i);
        }
        std::vector<double> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = std::abs(margin[i]);
        out.minority_exhausted = pool.size() < k;
        chosen = top_k(std::move(pool), key, k);
        break;
      }
      case Adversary::RandomFlip: {
        NormalStream pick(derive_seed(seed, StreamRole::Noise));
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = 0; i < k; ++i) {
          const std::size_t j = i + static_cast<std::size_t>(pick.below(n - i));
          std::swap(perm[i], perm[j]);
        }
        chosen.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
        break;
      }
    }
  }
  for (std::size_t i : chosen) labels[i] = flip(labels[i]);
  out.flipped = chosen.size();
  out.data = LabeledDataset(d, std::move(features), std::move(labels));
  return out;
}

std::vector<LabeledDataset> split(const LabeledDataset& s, const std::vector<double>& weights,
                                  std::uint64_t seed) {
  if (weights.empty()) throw Error("split: no weights");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw Error("split: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error("split: weights must sum to 1");
  const std::size_t n = s.size();
  if (weights.size() > n) throw Error("split: more parts than points");

  // Largest-remainder apportionment, ties to the earlier part.
  std::vector<std::size_t> sizes(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double exact = weights[j] * static_cast<double>(n);
    sizes[j] = static_cast<std::size_t>(std::floor(exact));
    assigned += sizes[j];
    remainders.emplace_back(exact - std::floor(exact), j);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++sizes[remainders[r % remainders.size()].second];

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  NormalStream rng(derive_seed(seed, StreamRole::Split));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }

  std::vector<LabeledDataset> parts;
  std::size_t offset = 0;
  for (std::size_t size : sizes) {
    std::vector<std::size_t> idx(perm.begin() + static_cast<std::ptrdiff_t>(offset),
                                 perm.begin() + static_cast<std::ptrdiff_t>(offset + size));
    std::sort(idx.begin(), idx.end());
    parts.push_back(s.subset(idx));
    offset += size;
  }
  return parts;
}

}  // namespace halftest::synth
