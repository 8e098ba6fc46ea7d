#include <doctest.h>

#include <cmath>
#include <limits>

#include "halftest/core/dataset.hpp"
#include "halftest/core/gaussian.hpp"
#include "halftest/core/halfspace.hpp"
#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"
#include "halftest/core/stats.hpp"
#include "halftest/core/verdict.hpp"
#include "halftest/oracle/oracle.hpp"

using namespace halftest;

namespace {

Vector point(std::initializer_list<double> v) { return Vector(v); }

LabeledDataset gaussian_sample(std::size_t d, std::size_t n, std::uint64_t seed) {
  NormalStream rng(seed);
  LabeledDataset s(d);
  Vector x(d);
  for (std::size_t i = 0; i < n; ++i) {
    rng.fill_normal(x);
    s.push_back(x, Label::positive);
  }
  return s;
}

}  // namespace

TEST_CASE("evaluate uses sign(0) = +1") {
  const auto h = Halfspace::from_unit(basis_vector(3, 0), 0.0);
  CHECK(evaluate(h, point({0, 0, 0})) == Label::positive);
  CHECK(evaluate(h, point({-1, 0, 0})) == Label::negative);
  const auto shifted = Halfspace::from_unit(basis_vector(3, 0), -0.5);
  CHECK(evaluate(shifted, point({0.3, 0, 0})) == Label::negative);
  CHECK(evaluate(shifted, point({0.5, 0, 0})) == Label::positive);
}

TEST_CASE("evaluate on a grid straddling the boundary") {
  const auto h = Halfspace::from_unit(basis_vector(2, 1), 0.25);
  for (int i = -50; i <= 50; ++i) {
    const double y = -0.25 + i * 0.01;
    const Label expected = h.margin(point({0.7, y})) >= 0.0 ? Label::positive : Label::negative;
    CHECK(evaluate(h, point({0.7, y})) == expected);
  }
}

TEST_CASE("evaluate rejects dimension mismatch") {
  const auto h = Halfspace::from_unit(basis_vector(3, 0), 0.0);
  CHECK_THROWS_AS((void)evaluate(h, point({1, 2})), Error);
}

TEST_CASE("halfspace construction enforces a unit direction") {
  CHECK_THROWS_AS(Halfspace::from_unit(point({1, 1}), 0.0), Error);
  const auto h = Halfspace::normalized(point({3, 4}), 10.0);
  CHECK(norm2(h.direction()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.threshold() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Halfspace::normalized(point({0, 1e-13}), 1.0), Error);
}

TEST_CASE("constant halfspaces") {
  const auto plus = Halfspace::constant(3, Label::positive);
  const auto minus = Halfspace::constant(3, Label::negative);
  CHECK(plus.is_constant());
  CHECK(evaluate(plus, point({-100, 5, 2})) == Label::positive);
  CHECK(evaluate(minus, point({100, 5, 2})) == Label::negative);
  CHECK_FALSE(Halfspace::from_unit(basis_vector(3, 0), 1.0).is_constant());
}

TEST_CASE("empirical error examples") {
  const auto h = Halfspace::from_unit(basis_vector(2, 0), 0.0);
  LabeledDataset s(2);
  for (int i = 0; i < 10; ++i) {
    const Vector x = point({i - 4.5, 1.0});
    s.push_back(x, evaluate(h, x));
  }
  CHECK(empirical_error(h, s) == 0.0);

  LabeledDataset negated = s;
  for (std::size_t i = 0; i < s.size(); ++i) negated.set_label(i, flip(s.y(i)));
  CHECK(empirical_error(h, negated) == 1.0);

  LabeledDataset three = s;
  for (std::size_t i : {1u, 4u, 8u}) three.set_label(i, flip(s.y(i)));
  CHECK(empirical_error(h, three) == doctest::Approx(0.3));

  CHECK_THROWS_AS((void)empirical_error(h, LabeledDataset(2)), Error);
}

TEST_CASE("label-complement identity") {
  const auto s = gaussian_sample(3, 2000, 5);
  LabeledDataset labeled(3);
  NormalStream rng(9);
  for (std::size_t i = 0; i < s.size(); ++i) {
    labeled.push_back(s.x(i), rng.uniform() < 0.3 ? Label::negative : Label::positive);
  }
  for (double t : {-1.0, 0.0, 0.4}) {
    const auto h = Halfspace::normalized(point({1, -2, 0.5}), t);
    CHECK(empirical_error(h, labeled) + empirical_error(h.negated(), labeled) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("gaussian tail and density values") {
  CHECK(gaussian_tail(0.0) == 0.5);
  CHECK(gaussian_tail(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
  CHECK(gaussian_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(gaussian_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-15));
  CHECK(gaussian_pdf(-2.5) == gaussian_pdf(2.5));
  for (double t = 0.1; t < 9.0; t += 0.37) CHECK(gaussian_tail(t) <= gaussian_pdf(t) / t);
  CHECK(gaussian_tail(50.0) == 0.0);
  CHECK(gaussian_tail(-50.0) == 1.0);
}

TEST_CASE("gaussian tail accurate to 1e-12 and monotone on [-10, 10]") {
  double prev = 2.0;
  for (int i = -1000; i <= 1000; ++i) {
    const double t = i / 100.0;
    const double v = gaussian_tail(t);
    CHECK(std::abs(v - oracle::gaussian_tail_precise(t)) <= 1e-12);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("tail derivative equals minus density") {
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    const double t = -4.0 + 8.0 * i / 19.0;
    const double slope = (gaussian_tail(t + h) - gaussian_tail(t - h)) / (2 * h);
    CHECK(std::abs(slope + gaussian_pdf(t)) <= 1e-6);
  }
}

TEST_CASE("gaussian interval") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(gaussian_interval(-inf, inf) == doctest::Approx(1.0));
  CHECK(gaussian_interval(0.0, inf) == doctest::Approx(0.5));
  CHECK(gaussian_interval(-1.0, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-13));
  CHECK(gaussian_interval(8.0, 9.0) ==
        doctest::Approx(gaussian_tail(8.0) - gaussian_tail(9.0)).epsilon(1e-10));
}

TEST_CASE("spectral_upper examples") {
  CHECK(spectral_upper(SymmetricMatrix::identity(5)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(spectral_upper(SymmetricMatrix::diagonal(point({3, 1, 1}))) ==
        doctest::Approx(3.0).epsilon(1e-10));
  const auto s = gaussian_sample(5, 100'000, 3);
  const double top = spectral_upper(second_moment(s));
  CHECK(top >= 0.9);
  CHECK(top <= 1.2);
  CHECK(spectral_upper(SymmetricMatrix(3)) == 0.0);
}

TEST_CASE("spectral_upper scales linearly") {
  SymmetricMatrix m(4);
  m.add_outer(point({1, 2, 0, -1}));
  m.add_outer(point({0.5, -1, 2, 1}), 0.7);
  m.add_outer(point({0, 0, 1, 1}), 0.2);
  const double base = spectral_upper(m);
  for (double a : {0.5, 2.0, 10.0}) {
    SymmetricMatrix scaled = m;
    scaled.scale(a);
    CHECK(spectral_upper(scaled) == doctest::Approx(a * base).epsilon(1e-9));
  }
}

TEST_CASE("spectral_upper matches a rank-one norm") {
  SymmetricMatrix m(5);
  const Vector x = point({2, 2, 2, 2, 2});
  m.add_outer(x);
  CHECK(spectral_upper(m) == doctest::Approx(20.0).epsilon(1e-10));
}

TEST_CASE("spectral_upper reports non-convergence") {
  SymmetricMatrix tiny_cap = SymmetricMatrix::diagonal(point({1.0, 0.999999}));
  CHECK_THROWS_WITH_AS(spectral_upper(tiny_cap, 1e-15, 1), "spectral_upper: no convergence after 1 steps",
                       Error);
}

TEST_CASE("normalization of near-zero vectors is an error") {
  CHECK_THROWS_AS(normalized(point({1e-13, 0})), Error);
  CHECK(normalized(point({0, 3}))[1] == 1.0);
}

TEST_CASE("statistics helpers") {
  LabeledDataset s(2);
  s.push_back(point({1, 2}), Label::positive);
  s.push_back(point({-1, 0}), Label::negative);
  const Vector mean = empirical_mean(s);
  CHECK(mean[0] == 0.0);
  CHECK(mean[1] == 1.0);
  const Vector chow = chow_vector(s);
  CHECK(chow[0] == 1.0);
  CHECK(chow[1] == 1.0);
  const auto m = second_moment(s);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 1) == 2.0);
}

TEST_CASE("seed derivation separates roles and indices") {
  CHECK(derive_seed(1, StreamRole::Features) != derive_seed(1, StreamRole::Noise));
  CHECK(derive_seed(1, StreamRole::Features, 0) != derive_seed(1, StreamRole::Features, 1));
  CHECK(derive_seed(1, StreamRole::Features, 3) == derive_seed(1, StreamRole::Features, 3));
  for (std::uint64_t c = 0; c < 1000; ++c) {
    const double u = counter_uniform(42, c);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("normal stream is reproducible and standardized") {
  NormalStream a(7), b(7);
  double sum = 0.0, sq = 0.0;
  const int n = 200'000;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("verdict invariants") {
  const auto ok = TesterVerdict::accept();
  CHECK(ok.accepted());
  CHECK(ok.diagnostic().empty());
  const auto bad = TesterVerdict::reject(TestKind::Covariance, 2.31, 2.0, "spectral norm");
  CHECK_FALSE(bad.accepted());
  CHECK(bad.rejection().test == TestKind::Covariance);
  CHECK(bad.diagnostic().find("2.31") != std::string::npos);
  CHECK_THROWS_AS((void)ok.rejection(), Error);
}

TEST_CASE("label parsing") {
  CHECK(label_from_int(1) == Label::positive);
  CHECK(label_from_int(-1) == Label::negative);
  CHECK_THROWS_AS(label_from_int(0), Error);
}

TEST_CASE("config validation") {
  LearnConfig c;
  CHECK_NOTHROW(c.validate());
  c.epsilon = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c.epsilon = 0.1;
  c.tau = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}
