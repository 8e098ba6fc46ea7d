#include <doctest.h>

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numeric>

#include "halftest/core/gaussian.hpp"
#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"
#include "halftest/core/stats.hpp"
#include "halftest/synth/generate.hpp"
#include "halftest/testers/testers.hpp"

using namespace halftest;
using namespace halftest::testers;

namespace {

LabeledDataset sample(std::size_t d, std::size_t n, std::uint64_t seed,
                      synth::Marginal m = synth::Marginal::standard_gaussian()) {
  return synth::generate(d, n, m, Halfspace::from_unit(basis_vector(d, 0), 0.0), {}, seed).data;
}

std::vector<double> sorted_normals(std::size_t n, std::uint64_t seed, double shift = 0.0) {
  NormalStream rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal() + shift;
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("covariance test examples") {
  CHECK(test_covariance(sample(5, 100'000, 1)).accepted());
  const auto scaled = sample(5, 100'000, 1, synth::Marginal::scaled_gaussian(std::sqrt(3.0)));
  const auto v = test_covariance(scaled);
  REQUIRE_FALSE(v.accepted());
  CHECK(v.rejection().test == TestKind::Covariance);
  CHECK(v.rejection().statistic == doctest::Approx(3.0).epsilon(0.05));

  LabeledDataset single(5);
  single.push_back(std::vector<double>(5, 2.0), Label::positive);
  const auto one = test_covariance(single);
  REQUIRE_FALSE(one.accepted());
  CHECK(one.rejection().statistic == doctest::Approx(20.0).epsilon(1e-9));
  CHECK_THROWS_AS(test_covariance(LabeledDataset(3)), Error);
}

TEST_CASE("mean test examples") {
  LabeledDataset pair(3);
  pair.push_back(std::vector<double>{1.5, -2, 0.25}, Label::positive);
  pair.push_back(std::vector<double>{-1.5, 2, -0.25}, Label::negative);
  CHECK(test_mean(pair, 1e-9).accepted());

  LabeledDataset axis(3);
  for (int i = 0; i < 10; ++i) axis.push_back(basis_vector(3, 0), Label::positive);
  CHECK_FALSE(test_mean(axis, 1.0).accepted());
  CHECK_FALSE(test_mean(axis, 0.5).accepted());

  CHECK(test_mean(sample(5, 100'000, 2), 0.05).accepted());
}

TEST_CASE("ks statistic on exact quantiles") {
  const std::size_t n = 1000;
  const boost::math::normal standard;
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = boost::math::quantile(standard, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  CHECK(ks_statistic(q) <= 0.5 / n + 1e-12);
  CHECK(ks_test(q, 0.01).accepted());
}

TEST_CASE("ks statistic on a point mass") {
  const std::vector<double> zeros(50, 0.0);
  CHECK(ks_statistic(zeros) == doctest::Approx(0.5));
  CHECK_FALSE(ks_test(zeros, 0.4).accepted());
}

TEST_CASE("ks test detects a location shift") {
  const auto shifted = sorted_normals(100'000, 3, 0.5);
  const double stat = ks_statistic(shifted);
  CHECK(stat == doctest::Approx(gaussian_tail(-0.25) - gaussian_tail(0.25)).epsilon(0.05));
  CHECK_FALSE(ks_test(shifted, 0.05).accepted());
}

TEST_CASE("ks test is translation sensitive at three epsilon") {
  for (double eps : {0.02, 0.05, 0.1}) {
    for (double c : {3 * eps, -3 * eps}) {
      CHECK_FALSE(ks_test(sorted_normals(10'000, 4, c), eps).accepted());
    }
  }
}

TEST_CASE("ks statistic requires sorted input") {
  const std::vector<double> v{0.0, -1.0};
  CHECK_THROWS_AS(ks_statistic(v), Error);
}

TEST_CASE("ks statistic matches a brute-force supremum") {
  const auto v = sorted_normals(300, 5);
  double brute = 0.0;
  for (double x : v) {
    for (double t : {std::nextafter(x, -1e300), x}) {
      const double above = static_cast<double>(std::count_if(v.begin(), v.end(), [&](double y) {
                             return y > t;
                           })) /
                           300.0;
      brute = std::max(brute, std::abs(above - gaussian_tail(t)));
    }
  }
  CHECK(ks_statistic(v) == doctest::Approx(brute).epsilon(1e-9));
}

TEST_CASE("trimmed stability examples") {
  const std::vector<double> constant(1000, 3.5);
  CHECK(trimmed_mean_shift(constant, 0.05) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(test_trimmed_stability(constant, 0.05).accepted());

  auto gauss = sorted_normals(100'000, 6);
  const double shift = trimmed_mean_shift(gauss, 0.05);
  // Removing the top 5% lowers the mean by G(q)/(1−ε) with q the 95% quantile.
  CHECK(shift == doctest::Approx(gaussian_pdf(1.6448536269514722) / 0.95).epsilon(0.05));
  CHECK(test_trimmed_stability(gauss, 0.05).accepted());

  for (std::size_t i = gauss.size() - 5000; i < gauss.size(); ++i) gauss[i] = 20.0;
  const auto burst = test_trimmed_stability(gauss, 0.05);
  REQUIRE_FALSE(burst.accepted());
  CHECK(burst.rejection().statistic == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("gaussian moments and monomial counts") {
  CHECK(gaussian_moment(0) == 1.0);
  CHECK(gaussian_moment(2) == 1.0);
  CHECK(gaussian_moment(3) == 0.0);
  CHECK(gaussian_moment(4) == 3.0);
  CHECK(gaussian_moment(8) == 105.0);
  CHECK(monomial_count(3, 4) == 34);
  CHECK(monomial_count(1, 4) == 4);
  CHECK(monomial_count(5, 1) == 5);
  CHECK(default_moment_tol(4, 100'000) == doctest::Approx(10 * std::sqrt(105.0) / std::sqrt(1e5)));
}

TEST_CASE("moment test examples") {
  CHECK(test_moments(sample(3, 100'000, 7), 4, 0.2).accepted());
  const auto cube = sample(3, 100'000, 7, synth::Marginal::uniform_cube(std::sqrt(3.0)));
  const auto v = test_moments(cube, 4, 0.2);
  REQUIRE_FALSE(v.accepted());
  CHECK(v.rejection().test == TestKind::Moments);
  CHECK(v.rejection().statistic == doctest::Approx(3.0 - 1.8).epsilon(0.05));
}

TEST_CASE("moment test on a point set with exact gaussian moments") {
  // Equal-weight {−√3, 0, 0, 0, 0, +√3} matches N(0,1) through degree 5;
  // its tensor square matches every mixed moment of N(0, I₂) through degree 4.
  const double r = std::sqrt(3.0);
  const std::vector<double> nodes{-r, 0, 0, 0, 0, r};
  LabeledDataset s(2);
  for (double a : nodes) {
    for (double b : nodes) s.push_back(std::vector<double>{a, b}, Label::positive);
  }
  const auto rep = moment_deviation(s, 4);
  CHECK(rep.worst_deviation <= 1e-12);
  CHECK(test_moments(s, 4, 1e-9).accepted());
  // Degree 6 is where the set stops matching: E[x⁶] = 27·(1/3) = 9 versus 15.
  CHECK(moment_deviation(s, 6).worst_deviation == doctest::Approx(6.0));
}

TEST_CASE("moment test guards the monomial count") {
  LabeledDataset s(200);
  s.push_back(std::vector<double>(200, 0.0), Label::positive);
  CHECK_THROWS_AS(moment_deviation(s, 4), Error);
}

TEST_CASE("wedge events partition the sample") {
  const auto s = sample(4, 20'000, 8);
  const Vector v = normalized(std::vector<double>{1, 1, 0, -1});
  const auto st = wedge_statistics(s, v, 0.1);
  CHECK(st.half_bands == static_cast<long long>(std::ceil(std::sqrt(std::log(10.0)) / 0.1)));
  CHECK(st.events.size() == static_cast<std::size_t>(2 * st.half_bands + 4));
  std::size_t total = 0;
  double mass = 0.0;
  for (std::size_t i = 0; i < st.events.size(); ++i) {
    total += st.events[i].count;
    mass += st.events[i].gaussian_mass;
    if (i > 0) CHECK(st.events[i].lo == st.events[i - 1].hi);
  }
  CHECK(total == s.size());
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(st.events.front().lo));
  CHECK(std::isinf(st.events.back().hi));
}

TEST_CASE("wedge test examples") {
  CHECK(wedge_bound_test(sample(5, 1'000'000, 9), basis_vector(5, 0), 0.1).accepted());

  auto flat = sample(5, 100'000, 10);
  for (std::size_t i = 0; i < flat.size(); ++i) flat.x_mut(i)[0] = 0.0;
  const auto mass = wedge_bound_test(flat, basis_vector(5, 0), 0.1);
  REQUIRE_FALSE(mass.accepted());
  CHECK(mass.rejection().test == TestKind::WedgeMass);

  auto wide = sample(5, 100'000, 11);
  for (std::size_t i = 0; i < wide.size(); ++i) {
    for (std::size_t a = 1; a < 5; ++a) wide.x_mut(i)[a] *= 2.0;
  }
  const auto cond = wedge_bound_test(wide, basis_vector(5, 0), 0.1);
  REQUIRE_FALSE(cond.accepted());
  CHECK(cond.rejection().test == TestKind::WedgeConditionalCovariance);
  CHECK(cond.rejection().statistic == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("wedge workspace matches a direct computation") {
  const auto s = sample(3, 5'000, 12);
  const WedgeWorkspace ws(s);
  const Vector v = normalized(std::vector<double>{0.3, -1, 2});
  const auto st = ws.statistics(v, 0.2);
  // Recompute the worst orthogonal norm event by event from scratch.
  double worst = 0.0;
  for (const auto& e : st.events) {
    SymmetricMatrix m(3);
    std::size_t count = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double p = dot(v, s.x(i));
      if (!(p >= e.lo && p < e.hi)) continue;
      Vector r(s.x(i).begin(), s.x(i).end());
      axpy(-p, v, r);
      m.add_outer(r);
      ++count;
    }
    CHECK(count == e.count);
    if (count < 20) continue;
    m.scale(1.0 / static_cast<double>(count));
    const double norm = spectral_upper(m);
    CHECK(e.orthogonal_norm == doctest::Approx(norm).epsilon(1e-9));
    worst = std::max(worst, norm);
  }
  CHECK(st.worst_orthogonal_norm == doctest::Approx(worst).epsilon(1e-9));
}

TEST_CASE("wedge test input checks") {
  const auto s = sample(3, 100, 13);
  CHECK_THROWS_AS(wedge_statistics(s, std::vector<double>{1, 1, 0}, 0.1), Error);
  CHECK_THROWS_AS(wedge_statistics(s, basis_vector(3, 0), 0.6), Error);
  CHECK_THROWS_AS(wedge_statistics(s, basis_vector(2, 0), 0.1), Error);
}

TEST_CASE("verdicts are deterministic") {
  const auto s = sample(4, 10'000, 14);
  const Vector v = normalized(std::vector<double>{1, 2, 3, 4});
  const auto a = wedge_statistics(s, v, 0.1);
  const auto b = wedge_statistics(s, v, 0.1);
  CHECK(a.total_variation == b.total_variation);
  CHECK(a.worst_orthogonal_norm == b.worst_orthogonal_norm);
  CHECK(moment_deviation(s, 4).worst_deviation == moment_deviation(s, 4).worst_deviation);
}

TEST_CASE("single testers accept gaussian samples") {
  int failures = 0;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto s = sample(5, 100'000, seed);
    auto proj = project(s, basis_vector(5, 0));
    std::sort(proj.begin(), proj.end());
    failures += !test_covariance(s).accepted();
    failures += !test_mean(s, 0.05).accepted();
    failures += !ks_test(proj, 0.05).accepted();
    failures += !test_trimmed_stability(proj, 0.05).accepted();
    failures += !test_moments(s, 4, default_moment_tol(4, s.size())).accepted();
    failures += !wedge_bound_test(s, basis_vector(5, 0), 0.1).accepted();
  }
  CHECK(failures == 0);
}
