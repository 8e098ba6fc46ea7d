#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "halftest/core/gaussian.hpp"
#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"
#include "halftest/core/stats.hpp"
#include "halftest/localization/localization.hpp"
#include "halftest/oracle/oracle.hpp"
#include "halftest/synth/generate.hpp"
#include "halftest/testers/testers.hpp"

using namespace halftest;
using namespace halftest::localization;

namespace {

LabeledDataset gaussian(std::size_t d, std::size_t n, std::uint64_t seed) {
  return synth::generate(d, n, synth::Marginal::standard_gaussian(),
                         Halfspace::from_unit(basis_vector(d, 0), 0.0), {}, seed)
      .data;
}

Vector scaled(Vector v, double a) {
  for (double& c : v) c *= a;
  return v;
}

Vector random_unit(NormalStream& rng, std::size_t d) {
  Vector v(d);
  rng.fill_normal(v);
  return normalized(v);
}

double distance(std::span<const double> a, std::span<const double> b) {
  Vector diff(a.begin(), a.end());
  axpy(-1.0, b, diff);
  return norm2(diff);
}

}  // namespace

TEST_CASE("sigma_for examples") {
  CHECK(sigma_for(scaled(basis_vector(3, 0), 4.0)) == doctest::Approx(0.25));
  CHECK(sigma_for(basis_vector(3, 1)) == doctest::Approx(std::sqrt(0.5)));
  CHECK(sigma_for(std::vector<double>{1.0, 1.0, 0.0}) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(sigma_for(std::vector<double>{0, 0, 0}), Error);
}

TEST_CASE("acceptance probability examples") {
  const auto p = RejectionParams::centered_at(scaled(basis_vector(3, 0), 2.0), 0.5);
  CHECK(p.peak() == doctest::Approx(8.0 / 3.0));
  CHECK(accept_probability(p, std::vector<double>{8.0 / 3.0, 1.0, -4.0}) == doctest::Approx(1.0));
  CHECK(accept_probability(p, std::vector<double>{0, 0, 0}) ==
        doctest::Approx(std::exp(-32.0 / 3.0)).epsilon(1e-12));
  CHECK(accept_probability(p, std::vector<double>{0, 0, 0}) == doctest::Approx(2.40e-5).epsilon(0.01));
  CHECK(expected_acceptance(p) == doctest::Approx(0.5 * std::exp(-8.0 / 3.0)).epsilon(1e-12));
  CHECK(expected_acceptance(p) == doctest::Approx(0.03474).epsilon(1e-3));
  CHECK(expected_acceptance(p) == doctest::Approx(oracle::acceptance_rate(2.0, 0.5)).epsilon(1e-9));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(RejectionParams::centered_at(basis_vector(3, 0), 1.0), Error);
  CHECK_THROWS_AS(RejectionParams::centered_at(basis_vector(3, 0), 0.0), Error);
  CHECK_THROWS_AS(RejectionParams::centered_at(std::vector<double>{0, 0, 0}), Error);
  CHECK_THROWS_AS(RejectionParams::along(std::vector<double>{1, 1, 0}, 1.0, 0.5), Error);
}

TEST_CASE("square roots of the shaped covariance are inverse") {
  NormalStream rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto p = RejectionParams::centered_at(scaled(random_unit(rng, 6), 0.5 + 3 * rng.uniform()));
    Vector probe(6);
    rng.fill_normal(probe);
    CHECK(distance(p.sigma_half(p.sigma_inv_half(probe)), probe) <= 1e-12 * (1 + norm2(probe)));
    CHECK(distance(p.sigma_inv_half(p.sigma_half(probe)), probe) <= 1e-12 * (1 + norm2(probe)));
  }
}

TEST_CASE("to_isotropic examples") {
  const Vector w = scaled(basis_vector(3, 0), 2.0);
  const auto p = RejectionParams::centered_at(w, 0.5);
  const Vector zero = to_isotropic(p, w);
  CHECK(norm2(zero) <= 1e-15);
  const Vector z = to_isotropic(p, std::vector<double>{3, 1, 0});
  CHECK(z[0] == doctest::Approx(2.0));
  CHECK(z[1] == doctest::Approx(1.0));
  CHECK(z[2] == doctest::Approx(0.0));

  NormalStream rng(2);
  for (int i = 0; i < 100; ++i) {
    Vector x(3);
    rng.fill_normal(x);
    CHECK(distance(from_isotropic(p, to_isotropic(p, x)), x) <= 1e-12 * (1 + norm2(x)));
  }
}

TEST_CASE("transformed halfspace examples") {
  const auto p = RejectionParams::centered_at(scaled(basis_vector(3, 0), 2.0), 0.5);
  const auto through = transformed_halfspace(p, Halfspace::from_unit(basis_vector(3, 0), -2.0));
  CHECK(distance(through.direction(), basis_vector(3, 0)) <= 1e-12);
  CHECK(through.threshold() == doctest::Approx(0.0).scale(1.0));
  const auto ortho = transformed_halfspace(p, Halfspace::from_unit(basis_vector(3, 1), 0.0));
  CHECK(distance(ortho.direction(), basis_vector(3, 1)) <= 1e-12);
  CHECK(ortho.threshold() == 0.0);
  CHECK_THROWS_AS(transformed_halfspace(p, Halfspace::constant(3, Label::positive)), Error);
}

TEST_CASE("localization preserves labels") {
  const auto s = gaussian(4, 5000, 3);
  NormalStream rng(4);
  for (int i = 0; i < 30; ++i) {
    const Halfspace h = Halfspace::from_unit(random_unit(rng, 4), rng.normal());
    const auto p = RejectionParams::centered_at(scaled(random_unit(rng, 4), 0.3 + 3 * rng.uniform()));
    const Halfspace moved = transformed_halfspace(p, h);
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (std::abs(h.margin(s.x(j))) <= 1e-9) continue;
      CHECK(evaluate(h, s.x(j)) == evaluate(moved, to_isotropic(p, s.x(j))));
    }
  }
}

TEST_CASE("threshold shrinks for good centers") {
  // A center at distance α from the boundary yields threshold |v·w + t|/‖Σ^{1/2}v‖.
  NormalStream rng(5);
  for (int i = 0; i < 200; ++i) {
    const double t = 1.0 + 2.0 * rng.uniform();
    const double alpha = 0.1 * rng.uniform();
    const Halfspace h = Halfspace::from_unit(basis_vector(4, 0), -t);
    Vector w = scaled(basis_vector(4, 0), t + alpha);
    const auto p = RejectionParams::centered_at(w);
    const double beta = gaussian_tail(norm2(w));
    const double moved = std::abs(transformed_halfspace(p, h).threshold());
    CHECK(moved <= 4.0 * alpha * std::sqrt(std::log(1.0 / beta)) + 1e-12);
  }
}

TEST_CASE("revert_direction examples") {
  const Vector w = normalized(std::vector<double>{1, 2, 2});
  const auto p = RejectionParams::along(w, 3.0, 1.0 / 3.0);
  CHECK(distance(revert_direction(w, p), w) <= 1e-12);
  const Vector ortho = normalized(std::vector<double>{2, -1, 0});
  CHECK(distance(revert_direction(ortho, p), ortho) <= 1e-12);
  CHECK_THROWS_AS(revert_direction(std::vector<double>{1, 1, 0}, p), Error);
}

TEST_CASE("reversion round trip") {
  NormalStream rng(6);
  for (int i = 0; i < 100; ++i) {
    const auto p = RejectionParams::along(random_unit(rng, 5), 4 * rng.uniform(), 0.05 + 0.9 * rng.uniform());
    const Vector truth = random_unit(rng, 5);
    const Vector forward = normalized(p.sigma_half(truth));
    CHECK(distance(revert_direction(forward, p), truth) <= 1e-12);
  }
}

TEST_CASE("reversion bound formula") {
  CHECK(reversion_error_bound({0.4, 0.7, 0.0}) == 0.0);
  CHECK(reversion_error_bound({0.4, 0.0, 0.05}) == doctest::Approx(8 * 0.05 * 0.4));
  CHECK(reversion_error_bound({0.4, 0.0, 0.05}, 2.0) == doctest::Approx(2 * 0.05 * 0.4));
  CHECK_THROWS_AS(reversion_error_bound({0.4, std::sqrt(2.0), 0.05}), Error);
  // Increasing in δ and β.
  CHECK(reversion_error_bound({0.4, 0.5, 0.06}) > reversion_error_bound({0.4, 0.5, 0.05}));
  CHECK(reversion_error_bound({0.4, 0.6, 0.05}) > reversion_error_bound({0.4, 0.5, 0.05}));
}

TEST_CASE("reversion bound is not monotone in sigma") {
  // (σ + β)(β/(σc) + 1) has its minimum at σ = √(β²/c), so it is not
  // decreasing over the whole range. Document the shape rather than assume it.
  const double at_small = reversion_error_bound({0.05, 0.5, 0.1});
  const double at_mid = reversion_error_bound({0.5, 0.5, 0.1});
  const double at_large = reversion_error_bound({0.95, 0.5, 0.1});
  CHECK(at_mid < at_small);
  CHECK(at_mid < at_large);
}

TEST_CASE("reverted error stays under the bound") {
  NormalStream rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Vector axis = random_unit(rng, 5);
    const double sigma = 0.2 + 0.5 * rng.uniform();
    const auto p = RejectionParams::along(axis, 1.0, sigma);
    Vector truth = axis;
    axpy(0.6 * rng.uniform(), random_unit(rng, 5), truth);
    truth = normalized(truth);
    const double beta = distance(truth, axis);
    const Vector exact = normalized(p.sigma_half(truth));
    Vector learned = exact;
    axpy(0.1 * rng.uniform(), random_unit(rng, 5), learned);
    learned = normalized(learned);
    const double delta = distance(learned, exact);
    const double err = distance(revert_direction(learned, p), truth);
    CHECK(err <= reversion_error_bound({sigma, beta, delta}) + 1e-12);
  }
}

TEST_CASE("reject filter keeps a crafted set at the peak") {
  const auto p = RejectionParams::centered_at(scaled(basis_vector(3, 0), 0.1), std::sqrt(0.5));
  LabeledDataset s(3);
  for (int i = 0; i < 200; ++i) {
    s.push_back(std::vector<double>{p.peak(), 0.01 * i, -0.02 * i}, i % 2 ? Label::positive : Label::negative);
  }
  const auto r = reject_filter(s, p, 1);
  CHECK(r.kept == s);
  CHECK(r.acceptance_fraction == 1.0);
  CHECK_FALSE(r.starved);
}

TEST_CASE("reject filter rate and law") {
  const auto s = gaussian(3, 100'000, 8);
  const Vector w = scaled(basis_vector(3, 0), 2.0);
  const auto p = RejectionParams::centered_at(w, 0.5);
  const auto r = reject_filter(s, p, 9);
  CHECK(std::abs(r.acceptance_fraction - 0.03474) <= 0.002);
  CHECK(r.kept.size() == static_cast<std::size_t>(std::llround(r.acceptance_fraction * 1e5)));
  std::vector<double> standardized;
  for (std::size_t i = 0; i < r.kept.size(); ++i) standardized.push_back((r.kept.x(i)[0] - 2.0) / 0.5);
  std::sort(standardized.begin(), standardized.end());
  CHECK(testers::ks_statistic(standardized) <= 0.03);
  CHECK(distance(empirical_mean(r.kept), w) <= 0.1);
}

TEST_CASE("reject filter matches closed-form rates") {
  const auto s = gaussian(3, 200'000, 10);
  for (double radius : {1.0, 2.0, 3.0}) {
    const auto p = RejectionParams::centered_at(scaled(basis_vector(3, 0), radius));
    const double rate = expected_acceptance(p);
    const double se = std::sqrt(rate * (1 - rate) / 200'000.0);
    const auto r = reject_filter(s, p, 11);
    CHECK(std::abs(r.acceptance_fraction - rate) <= 4 * se);
  }
}

TEST_CASE("acceptance dominates the tail mass") {
  for (double radius = std::sqrt(2.0); radius <= 4.0; radius += 0.1) {
    const auto p = RejectionParams::centered_at(scaled(basis_vector(2, 0), radius));
    CHECK(expected_acceptance(p) >= 0.1 * gaussian_tail(radius));
  }
}

TEST_CASE("sigma is not too small for good centers") {
  for (double radius = 0.2; radius <= 8.0; radius += 0.2) {
    const double beta = gaussian_tail(radius);
    CHECK(sigma_for(scaled(basis_vector(2, 0), radius)) * std::sqrt(std::log(1.0 / beta)) >= 0.3);
  }
}

TEST_CASE("mirrored peak is caught") {
  const auto s = gaussian(3, 200'000, 12);
  const auto p = RejectionParams::centered_at(scaled(basis_vector(3, 0), 2.0), 0.5);
  const auto wrong = reject_filter(s, p, 13, PeakSide::Away);
  std::vector<double> standardized;
  for (std::size_t i = 0; i < wrong.kept.size(); ++i) {
    standardized.push_back((wrong.kept.x(i)[0] - 2.0) / 0.5);
  }
  std::sort(standardized.begin(), standardized.end());
  CHECK(testers::ks_statistic(standardized) > 0.5);
}

TEST_CASE("reject filter is a pure function of seed and index") {
  const auto s = gaussian(3, 20'000, 14);
  const auto p = RejectionParams::centered_at(std::vector<double>{1.0, -0.5, 0.2});
  const auto a = reject_filter(s, p, 15);
  const auto b = reject_filter(s, p, 15);
  CHECK(a.kept == b.kept);
  // A prefix of the input keeps a prefix of the survivors.
  const auto half = reject_filter(s.prefix(10'000), p, 15);
  CHECK(half.kept == a.kept.prefix(half.kept.size()));
}

TEST_CASE("starvation is flagged") {
  const auto s = gaussian(3, 1000, 16);
  const auto r = reject_filter(s, RejectionParams::centered_at(scaled(basis_vector(3, 0), 4.0)), 17);
  CHECK(r.starved);
}
