#include "halftest/core/rng.hpp"

#include <cmath>
#include <numbers>

#include "halftest/core/types.hpp"

namespace halftest {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, StreamRole role, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(role));
  return splitmix64(h ^ splitmix64(index));
}

double counter_uniform(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(key ^ splitmix64(counter));
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

double NormalStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalStream::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(angle);
  has_cached_ = true;
  return r * std::cos(angle);
}

void NormalStream::fill_normal(std::span<double> out) {
  for (double& v : out) v = normal();
}

std::uint64_t NormalStream::below(std::uint64_t bound) {
  if (bound == 0) throw Error("NormalStream::below: zero bound");
  // Lemire's multiply-shift with rejection of the biased low band.
  std::uint64_t x = engine_();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t floor = -bound % bound;
    while (low < floor) {
      x = engine_();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace halftest
