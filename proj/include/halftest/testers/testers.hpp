#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/core/verdict.hpp"

namespace halftest::testers {

/// Accept iff λ_max(Ê[xxᵀ]) ≤ bound.
TesterVerdict test_covariance(const LabeledDataset& s, double bound = 2.0);

/// Accept iff ‖Ê[x]‖₂ < epsilon.
TesterVerdict test_mean(const LabeledDataset& s, double epsilon);

/// sup_t |#{x > t}/n − Pr[Z > t]|, evaluated on both sides of every order
/// statistic. `sorted` must be in nondecreasing order.
double ks_statistic(std::span<const double> sorted);
TesterVerdict ks_test(std::span<const double> sorted, double epsilon);

constexpr double kStabilityConstant = 4.0;

/// Larger of the mean shifts caused by dropping the ⌊εn⌋ largest or the
/// ⌊εn⌋ smallest values.
double trimmed_mean_shift(std::span<const double> values, double epsilon);
TesterVerdict test_trimmed_stability(std::span<const double> values, double epsilon);

/// Number of monomials of total degree 1..k in d variables.
std::size_t monomial_count(std::size_t d, int k);
constexpr std::size_t kMaxMonomials = 1'000'000;

/// E[Z^p] for Z ~ N(0,1): (p−1)!! for even p, 0 for odd p.
double gaussian_moment(int p);

/// 10·√E[Z^{2k}]/√n: ten standard errors of the highest-degree univariate
/// moment estimate.
double default_moment_tol(int k, std::size_t n);

struct MomentReport {
  double worst_deviation = 0.0;
  std::vector<int> worst_index;  // coordinate multiset of the worst monomial
};

/// Largest |Ê[x^α] − E_{N(0,I)}[x^α]| over 1 ≤ |α| ≤ k. Throws when the
/// monomial count exceeds kMaxMonomials.
MomentReport moment_deviation(const LabeledDataset& s, int k);
TesterVerdict test_moments(const LabeledDataset& s, int k, double moment_tol);

struct WedgeEvent {
  double lo = 0.0;  // inclusive
  double hi = 0.0;  // exclusive
  std::size_t count = 0;
  double gaussian_mass = 0.0;
  /// λ_max of the orthogonal second moment within the event; negative when
  /// the event holds too few points to be checked.
  double orthogonal_norm = -1.0;
};

struct WedgeStatistics {
  long long half_bands = 0;  // ⌈√log(1/η)/η⌉
  std::vector<WedgeEvent> events;
  double total_variation = 0.0;
  double worst_orthogonal_norm = 0.0;
  std::size_t worst_event = 0;
};

/// Caches per-point outer products so many directions can be tested
/// against the same sample cheaply. Holds a reference to `s`.
class WedgeWorkspace {
 public:
  explicit WedgeWorkspace(const LabeledDataset& s);
  WedgeStatistics statistics(std::span<const double> v, double eta) const;

 private:
  const LabeledDataset& data_;
  std::size_t packed_ = 0;     // d(d+1)/2
  std::vector<double> outer_;  // upper triangle of xxᵀ per point
};

/// Bands [iη, (i+1)η) for i = −B−1 … B plus the two tails beyond ±(B+1)η.
WedgeStatistics wedge_statistics(const LabeledDataset& s, std::span<const double> v, double eta);
TesterVerdict wedge_bound_test(const LabeledDataset& s, std::span<const double> v, double eta);
TesterVerdict wedge_verdict(const WedgeStatistics& stats, double eta);

}  // namespace halftest::testers
