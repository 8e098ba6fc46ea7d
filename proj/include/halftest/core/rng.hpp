#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace halftest {

/// Stream roles. Every consumer of randomness derives its own seed from
/// (master seed, role, index) so no two subsystems share a stream.
enum class StreamRole : std::uint64_t {
  Features = 1,
  Noise = 2,
  Split = 3,
  RejectFilter = 4,
  InnerFilter = 5,
  BoostTrial = 6,
  BoostSelect = 7,
  Holdout = 8,
  SweepTrial = 9,
  Test = 10,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t seed, StreamRole role, std::uint64_t index = 0);

/// Uniform in (0, 1] from a counter; pure function of (key, counter).
double counter_uniform(std::uint64_t key, std::uint64_t counter);

/// mt19937_64 plus a hand-written Box–Muller transform, so the normal
/// stream is identical across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double normal();
  void fill_normal(std::span<double> out);
  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace halftest
