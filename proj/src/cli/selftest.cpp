#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "halftest/cli/commands.hpp"
#include "halftest/core/gaussian.hpp"
#include "halftest/core/linalg.hpp"
#include "halftest/core/rng.hpp"
#include "halftest/core/stats.hpp"
#include "halftest/learner/pipeline.hpp"
#include "halftest/localization/localization.hpp"
#include "halftest/oracle/oracle.hpp"
#include "halftest/synth/generate.hpp"
#include "halftest/testers/testers.hpp"

namespace halftest::cli {

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Property {
  std::string name;
  std::function<Outcome()> check;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

LabeledDataset gaussian(std::size_t d, std::size_t n, std::uint64_t seed, double t_star = 0.0) {
  return synth::generate(d, n, synth::Marginal::standard_gaussian(),
                         Halfspace::from_unit(basis_vector(d, 0), -t_star), {}, seed)
      .data;
}

Vector random_unit(NormalStream& rng, std::size_t d) {
  Vector v(d);
  rng.fill_normal(v);
  return normalized(v);
}

// KS distance of the survivors' standardized axis projection and of one
// orthogonal projection, after filtering 10⁶ Gaussian points.
struct LawCheck {
  double fraction = 0.0;
  double ks_axis = 0.0;
  double ks_orthogonal = 0.0;
};

LawCheck rejection_law(const LabeledDataset& base, localization::PeakSide side) {
  const auto p = localization::RejectionParams::centered_at(Vector{2.0, 0.0, 0.0}, 0.5);
  const auto f = localization::reject_filter(base, p, 7, side);
  std::vector<double> along = project(f.kept, p.axis());
  std::vector<double> across = project(f.kept, basis_vector(3, 1));
  for (double& a : along) a = (a - p.radius()) / p.sigma();
  std::sort(along.begin(), along.end());
  std::sort(across.begin(), across.end());
  return {f.acceptance_fraction, testers::ks_statistic(along), testers::ks_statistic(across)};
}

std::vector<Property> properties() {
  std::vector<Property> out;

  out.push_back({"gaussian tail agrees with 50-digit reference on [-10, 10]", [] {
    double worst = 0.0;
    for (int i = -200; i <= 200; ++i) {
      const double t = i / 20.0;
      worst = std::max(worst, std::abs(gaussian_tail(t) - oracle::gaussian_tail_precise(t)));
    }
    return Outcome{worst <= 1e-12, "max abs error " + num(worst)};
  }});

  out.push_back({"tail derivative equals minus density", [] {
    double worst = 0.0;
    const double h = 1e-5;
    for (int i = 0; i < 20; ++i) {
      const double t = -4.0 + 8.0 * i / 19.0;
      const double slope = (gaussian_tail(t + h) - gaussian_tail(t - h)) / (2 * h);
      worst = std::max(worst, std::abs(slope + gaussian_pdf(t)));
    }
    return Outcome{worst <= 1e-6, "max deviation " + num(worst)};
  }});

  out.push_back({"acceptance-rate closed form matches quadrature", [] {
    double worst = 0.0;
    for (double r : {1.0, 2.0, 3.0}) {
      const auto p = localization::RejectionParams::centered_at(Vector{r, 0.0});
      worst = std::max(worst, std::abs(localization::expected_acceptance(p) -
                                       oracle::acceptance_rate(r, p.sigma())));
    }
    return Outcome{worst <= 1e-10, "max deviation " + num(worst)};
  }});

  auto base = std::make_shared<LabeledDataset>(gaussian(3, 1'000'000, 11));
  out.push_back({"filtered sample follows N(w, Sigma)", [base] {
    const auto law = rejection_law(*base, localization::PeakSide::Toward);
    const double rate = 0.5 * std::exp(-8.0 / 3.0);
    const bool ok = std::abs(law.fraction - rate) <= 0.002 && law.ks_axis <= 0.03 &&
                    law.ks_orthogonal <= 0.03;
    return Outcome{ok, "fraction " + num(law.fraction) + " (expect " + num(rate) + "), KS " +
                           num(law.ks_axis) + " along w, " + num(law.ks_orthogonal) + " across"};
  }});

  out.push_back({"mutation: mirrored acceptance peak is detected", [base] {
    const auto law = rejection_law(*base, localization::PeakSide::Away);
    return Outcome{law.ks_axis > 0.03,
                   "KS along w with the mirrored peak = " + num(law.ks_axis) + " (must exceed 0.03)"};
  }});

  out.push_back({"Chow vector equals 2G(t)v", [] {
    double worst = 0.0;
    double quad = 0.0;
    for (double t : {0.0, 1.0, 2.0}) {
      const auto s = gaussian(5, 200'000, 20 + static_cast<std::uint64_t>(t), t);
      Vector gap = chow_vector(s);
      gap[0] -= 2.0 * gaussian_pdf(t);
      worst = std::max(worst, norm2(gap));
      quad = std::max(quad, std::abs(oracle::chow_magnitude(-t) - 2.0 * gaussian_pdf(t)));
    }
    return Outcome{worst <= 0.02 && quad <= 1e-9,
                   "max sample gap " + num(worst) + ", quadrature gap " + num(quad)};
  }});

  out.push_back({"reverting the localized direction is exact", [] {
    NormalStream rng(derive_seed(3, StreamRole::Test));
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Vector axis = random_unit(rng, 6);
      const double sigma = 0.05 + 0.9 * rng.uniform();
      const auto p = localization::RejectionParams::along(axis, 1.0 + rng.uniform(), sigma);
      const Vector truth = random_unit(rng, 6);
      const Vector back = localization::revert_direction(normalized(p.sigma_half(truth)), p);
      for (std::size_t j = 0; j < truth.size(); ++j) {
        worst = std::max(worst, std::abs(back[j] - truth[j]));
      }
    }
    return Outcome{worst <= 1e-12, "max coordinate error " + num(worst)};
  }});

  out.push_back({"reversion error stays under its bound", [] {
    NormalStream rng(derive_seed(4, StreamRole::Test));
    double worst_ratio = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vector axis = random_unit(rng, 5);
      const double sigma = 0.2 + 0.5 * rng.uniform();
      const auto p = localization::RejectionParams::along(axis, 1.0, sigma);
      // Truth within distance < 1 of the axis.
      Vector truth = axis;
      const Vector tilt = random_unit(rng, 5);
      axpy(0.6 * rng.uniform(), tilt, truth);
      truth = normalized(truth);
      const double beta = std::sqrt(std::max(0.0, 2.0 - 2.0 * dot(truth, axis)));
      const Vector exact = normalized(p.sigma_half(truth));
      Vector learned = exact;
      axpy(0.1 * rng.uniform(), random_unit(rng, 5), learned);
      learned = normalized(learned);
      Vector diff = learned;
      axpy(-1.0, exact, diff);
      const double delta = norm2(diff);
      Vector err = localization::revert_direction(learned, p);
      axpy(-1.0, truth, err);
      const double bound = localization::reversion_error_bound({sigma, beta, delta});
      if (bound > 0.0) worst_ratio = std::max(worst_ratio, norm2(err) / bound);
    }
    return Outcome{worst_ratio <= 1.0, "largest error/bound " + num(worst_ratio)};
  }});

  out.push_back({"localization preserves every label", [] {
    NormalStream rng(derive_seed(5, StreamRole::Test));
    const auto s = gaussian(4, 2000, 30);
    std::size_t mismatches = 0;
    for (int i = 0; i < 20; ++i) {
      const Halfspace h = Halfspace::from_unit(random_unit(rng, 4), rng.normal());
      Vector w = random_unit(rng, 4);
      const double radius = 0.5 + 3.0 * rng.uniform();
      for (double& c : w) c *= radius;
      const auto p = localization::RejectionParams::centered_at(w);
      const Halfspace moved = localization::transformed_halfspace(p, h);
      for (std::size_t j = 0; j < s.size(); ++j) {
        const Vector z = localization::to_isotropic(p, s.x(j));
        if (evaluate(h, s.x(j)) != evaluate(moved, z)) {
          // Points within rounding of the boundary may legitimately flip.
          if (std::abs(h.margin(s.x(j))) > 1e-9) ++mismatches;
        }
      }
    }
    return Outcome{mismatches == 0, std::to_string(mismatches) + " labels changed"};
  }});

  out.push_back({"every tester accepts Gaussian input", [] {
    const auto s = gaussian(5, 100'000, 40, 1.0);
    std::vector<double> proj = project(s, basis_vector(5, 0));
    std::sort(proj.begin(), proj.end());
    std::vector<std::pair<std::string, TesterVerdict>> verdicts;
    verdicts.emplace_back("covariance", testers::test_covariance(s));
    verdicts.emplace_back("mean", testers::test_mean(s, 0.05));
    verdicts.emplace_back("kolmogorov", testers::ks_test(proj, 0.05));
    verdicts.emplace_back("trimmed", testers::test_trimmed_stability(proj, 0.05));
    verdicts.emplace_back("moments",
                          testers::test_moments(s, 4, testers::default_moment_tol(4, s.size())));
    verdicts.emplace_back("wedge", testers::wedge_bound_test(s, basis_vector(5, 0), 0.1));
    for (const auto& [name, v] : verdicts) {
      if (!v) return Outcome{false, name + " rejected: " + v.diagnostic()};
    }
    return Outcome{true, "6 testers accepted"};
  }});

  out.push_back({"testers reject the non-Gaussian foils", [] {
    const Halfspace truth = Halfspace::from_unit(basis_vector(5, 0), 0.0);
    auto draw = [&](synth::Marginal m) {
      return synth::generate(5, 100'000, m, truth, {}, 50).data;
    };
    const auto scaled = draw(synth::Marginal::scaled_gaussian(std::sqrt(3.0)));
    const auto cube = draw(synth::Marginal::uniform_cube(std::sqrt(3.0)));
    const auto mixture = draw(synth::Marginal::two_point_mixture(2.0));
    const double tol = testers::default_moment_tol(4, 100'000);
    std::vector<double> proj = project(mixture, basis_vector(5, 0));
    std::sort(proj.begin(), proj.end());
    const bool scaled_caught = !testers::test_covariance(scaled);
    const bool cube_caught = !testers::test_moments(cube, 4, tol);
    const bool mixture_caught =
        !testers::ks_test(proj, 0.05) || !testers::test_moments(mixture, 4, tol);
    return Outcome{scaled_caught && cube_caught && mixture_caught,
                   std::string("scaled ") + (scaled_caught ? "caught" : "missed") + ", cube " +
                       (cube_caught ? "caught" : "missed") + ", mixture " +
                       (mixture_caught ? "caught" : "missed")};
  }});

  out.push_back({"wedge-certified pairs match the quadrature disagreement", [] {
    const std::size_t n = 200'000;
    const auto s = gaussian(5, n, 60);
    const double eta = 0.1;
    NormalStream rng(derive_seed(6, StreamRole::Test));
    double worst_z = 0.0;
    bool within_bound = true;
    for (int i = 0; i < 20; ++i) {
      const Vector v_star = random_unit(rng, 5);
      if (!testers::wedge_bound_test(s, v_star, eta)) {
        return Outcome{false, "wedge test rejected Gaussian data"};
      }
      const double delta = 0.1 * rng.uniform();
      Vector v = v_star;
      axpy(delta, random_unit(rng, 5), v);
      v = normalized(v);
      Vector diff = v;
      axpy(-1.0, v_star, diff);
      const double t_star = rng.normal();
      const Halfspace a = Halfspace::from_unit(v_star, t_star);
      const Halfspace b = Halfspace::from_unit(v, t_star + eta * (2.0 * rng.uniform() - 1.0));
      std::size_t differ = 0;
      for (std::size_t j = 0; j < n; ++j) differ += evaluate(a, s.x(j)) != evaluate(b, s.x(j));
      const double empirical = static_cast<double>(differ) / static_cast<double>(n);
      const double exact = oracle::gaussian_disagreement(a, b);
      const double se = std::sqrt(std::max(exact * (1 - exact), 1e-12) / static_cast<double>(n));
      worst_z = std::max(worst_z, std::abs(empirical - exact) / se);
      if (empirical > 8.0 * (norm2(diff) + eta)) within_bound = false;
    }
    return Outcome{worst_z <= 3.0 && within_bound,
                   "largest deviation " + num(worst_z) + " standard errors" +
                       (within_bound ? "" : ", a pair exceeded 8(delta + eta)")};
  }});

  out.push_back({"shifted far tail keeps a constant fraction of its mass", [] {
    double worst = 1.0;
    for (int i = 0; i <= 20; ++i) {
      const double x = 10.0 + 0.5 * i;
      worst = std::min(worst, oracle::tail_ratio(x, 1.0 / x));
    }
    return Outcome{worst >= 0.1, "smallest ratio " + num(worst)};
  }});

  out.push_back({"threshold scoring matches direct evaluation", [] {
    const auto s = synth::generate(4, 5000, synth::Marginal::standard_gaussian(),
                                   Halfspace::from_unit(basis_vector(4, 0), -0.3),
                                   {0.1, synth::Adversary::RandomFlip}, 70)
                       .data;
    NormalStream rng(derive_seed(7, StreamRole::Test));
    const Vector v = random_unit(rng, 4);
    const double eps = 0.1;
    const long m = learner::threshold_steps(eps);
    const auto counts = learner::threshold_mistakes(s, v, eps, m);
    std::size_t bad = 0;
    for (long i = -m; i <= m; ++i) {
      const auto h = Halfspace::from_unit(v, static_cast<double>(i) * eps);
      const auto direct = static_cast<std::size_t>(
          std::llround(empirical_error(h, s) * static_cast<double>(s.size())));
      bad += direct != counts[static_cast<std::size_t>(i + m)];
    }
    return Outcome{bad == 0, std::to_string(bad) + " of " + std::to_string(2 * m + 1) +
                                 " thresholds disagree"};
  }});

  out.push_back({"generation and learning are reproducible", [] {
    const Halfspace truth = Halfspace::from_unit(basis_vector(5, 0), -0.5);
    const auto a = synth::generate(5, 20'000, synth::Marginal::standard_gaussian(), truth,
                                   {0.01, synth::Adversary::TailFlip}, 80);
    const auto b = synth::generate(5, 20'000, synth::Marginal::standard_gaussian(), truth,
                                   {0.01, synth::Adversary::TailFlip}, 80);
    if (!(a.data == b.data)) return Outcome{false, "datasets differ"};
    LearnConfig c;
    c.epsilon = 0.2;
    c.seed = 9;
    const auto x = learner::testable_learn(a.data, c);
    const auto y = learner::testable_learn(b.data, c);
    const bool same = x.accepted == y.accepted && x.selection_error == y.selection_error &&
                      (!x.chosen || (x.chosen->direction() == y.chosen->direction() &&
                                     x.chosen->threshold() == y.chosen->threshold()));
    return Outcome{same, same ? "identical outcomes" : "outcomes differ"};
  }});

  return out;
}

}  // namespace

int cmd_selftest(std::ostream& out) {
  std::vector<std::string> failures;
  const auto props = properties();
  for (const auto& p : props) {
    Outcome r;
    try {
      r = p.check();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    out << (r.pass ? "PASS  " : "FAIL  ") << p.name << "  (" << r.detail << ")\n" << std::flush;
    if (!r.pass) failures.push_back(p.name);
  }
  out << props.size() - failures.size() << " of " << props.size() << " properties passed\n";
  for (const auto& f : failures) out << "failed: " << f << "\n";
  return failures.empty() ? kExitSuccess : kExitUsage;
}

}  // namespace halftest::cli
