#include "halftest/cli/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "halftest/core/rng.hpp"
#include "halftest/learner/boosting.hpp"
#include "halftest/learner/pipeline.hpp"
#include "halftest/synth/dataset_io.hpp"
#include "halftest/synth/generate.hpp"

namespace halftest::cli {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double single(const std::vector<double>& values, const char* what) {
  if (values.size() != 1) throw Error(std::string("expected a single ") + what + " value");
  return values.front();
}

std::string strip_suffix(std::string path, const std::string& suffix) {
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    path.resize(path.size() - suffix.size());
  }
  return path;
}

void print_hypothesis(std::ostream& out, const Halfspace& h) {
  if (h.is_constant()) {
    out << "chosen: constant " << (h.threshold() > 0 ? "+1" : "-1") << "\n";
    return;
  }
  out << "chosen direction:";
  for (double v : h.direction()) out << ' ' << format_number(v);
  out << "\nchosen threshold: " << format_number(h.threshold()) << "\n";
}

}  // namespace

int cmd_gen(const ExperimentConfig& config, std::ostream& out) {
  config.validate();
  if (config.out.empty()) throw Error("gen: --out is required");
  const double budget = single(config.budgets, "budget");
  const double t_star = single(config.thresholds, "threshold");
  const auto g = synth::generate(config.d, config.n, config.marginal, config.truth(t_star),
                                 {budget, config.adversary}, config.seed);
  synth::write_dataset(config.out, g.data);

  const double n = static_cast<double>(g.data.size());
  out << "wrote " << g.data.size() << " points in dimension " << config.d << " to " << config.out
      << "\n"
      << "realized opt: " << fixed(static_cast<double>(g.flipped) / n, 3) << " (" << g.flipped
      << " of " << g.data.size() << " labels flipped)\n"
      << "label mass: +1 " << fixed(static_cast<double>(g.data.count(Label::positive)) / n, 4)
      << ", -1 " << fixed(static_cast<double>(g.data.count(Label::negative)) / n, 4) << "\n";
  if (g.minority_exhausted) {
    out << "note: the minority label ran out before the budget; " << g.requested_flips
        << " flips requested\n";
  }
  return kExitSuccess;
}

int cmd_learn(const std::string& dataset_path, const ExperimentConfig& config,
              std::ostream& out) {
  const LabeledDataset data = synth::read_dataset(dataset_path);
  auto parts = synth::split(data, {0.8, 0.2}, derive_seed(config.seed, StreamRole::Holdout));
  const LabeledDataset holdout = std::move(parts[1]);

  LearnConfig lc;
  lc.epsilon = config.epsilon;
  lc.tau = config.tau;
  lc.seed = config.seed;
  learner::DatasetSource source(std::move(parts[0]));
  const auto boost = learner::boosted_learn(source, data.dim(), lc);

  out << "points: " << data.size() << " (" << holdout.size() << " held out)\n"
      << "trials: " << boost.trials_run << " of " << boost.planned_trials << " run, "
      << boost.trials_rejected << " rejected" << (boost.trials_capped ? " (trial count capped)" : "")
      << "\n";

  // Every tester diagnostic: trial rejections individually, center skips
  // grouped by test with the first occurrence as the example.
  std::map<TestKind, std::pair<std::size_t, std::string>> skips;
  for (std::size_t i = 0; i < boost.trials.size(); ++i) {
    const auto& trial = boost.trials[i];
    if (trial.rejection) {
      out << "diagnostic: trial " << i << " rejected: " << trial.rejection->describe() << "\n";
    }
    for (const auto& [kind, entry] : trial.skip_reasons) {
      auto [it, fresh] = skips.try_emplace(kind, 0, entry.second.describe());
      it->second.first += entry.first;
    }
  }
  for (const auto& [kind, entry] : skips) {
    out << "diagnostic: " << entry.first << " centers skipped by " << to_string(kind)
        << ", e.g. " << entry.second << "\n";
  }

  const auto& final = boost.final;
  if (!final.accepted) {
    out << "verdict: reject\n"
        << "failing test: " << to_string(final.rejection->test) << "\n"
        << "reason: " << final.rejection->describe() << "\n";
    return kExitRejected;
  }
  out << "verdict: accept\n";
  print_hypothesis(out, *final.chosen);
  out << "selection error: " << format_number(final.selection_error) << "\n"
      << "holdout error: " << format_number(empirical_error(*final.chosen, holdout)) << "\n";
  return kExitSuccess;
}

std::uint64_t sweep_trial_seed(std::uint64_t seed, std::size_t position) {
  return derive_seed(seed, StreamRole::SweepTrial, position);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  const std::size_t per_budget = config.thresholds.size() * config.trials;
  const std::size_t total = config.budgets.size() * per_budget;
  std::vector<SweepRow> rows(total);

  auto run_one = [&](std::size_t position) {
    SweepRow& row = rows[position];
    row.budget = config.budgets[position / per_budget];
    row.t_star = config.thresholds[(position % per_budget) / config.trials];
    row.trial = position % config.trials;

    const std::uint64_t seed = sweep_trial_seed(config.seed, position);
    const Halfspace truth = config.truth(row.t_star);
    const synth::NoiseProfile noise{row.budget, config.adversary};
    const auto start = std::chrono::steady_clock::now();
    const auto sample = synth::generate(config.d, config.n, config.marginal, truth, noise, seed);
    LearnConfig lc;
    lc.epsilon = config.epsilon;
    lc.tau = config.tau;
    lc.seed = seed;
    const auto outcome = learner::testable_learn(sample.data, lc);
    if (config.timing) {
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    row.accepted = outcome.accepted;
    if (!outcome.accepted) {
      row.diagnostic = outcome.rejection->describe();
      return;
    }
    row.threshold = outcome.chosen->threshold();
    const auto fresh = synth::generate(config.d, config.holdout, config.marginal, truth, noise,
                                       derive_seed(seed, StreamRole::Holdout));
    row.error = empirical_error(*outcome.chosen, fresh.data);
  };

  workers = std::max<std::size_t>(1, std::min(workers, total));
  if (workers == 1) {
    for (std::size_t p = 0; p < total; ++p) run_one(p);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t p = next++; p < total; p = next++) {
        try {
          run_one(p);
        } catch (...) {
          std::lock_guard lock(failure_lock);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

int cmd_sweep(const ExperimentConfig& config, std::size_t workers, std::ostream& out) {
  const auto rows = run_sweep(config, workers);
  const std::string base = strip_suffix(config.out.empty() ? "sweep" : config.out, ".csv");
  const std::string csv_path = base + ".csv";
  const std::string json_path = base + ".json";

  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw Error("cannot write " + csv_path);
  write_csv(csv, rows);
  if (!csv.flush()) throw Error("write failed: " + csv_path);

  const auto summary = summarize(config, rows);
  if (const auto problems = validate_summary(summary); !problems.empty()) {
    throw Error("internal: summary fails its schema: " + problems.front());
  }
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw Error("cannot write " + json_path);
  js << summary.dump(2) << "\n";
  if (!js.flush()) throw Error("write failed: " + json_path);

  for (const auto& cell : summary["cells"]) {
    out << "budget " << format_number(cell["budget"].get<double>()) << "  t* "
        << format_number(cell["t_star"].get<double>()) << "  accepted "
        << cell["accepted"].get<std::size_t>() << "/" << cell["trials"].get<std::size_t>()
        << "  within bound " << cell["within_bound"].get<std::size_t>() << "  median error "
        << (cell["median_error"].is_null() ? std::string("-")
                                           : fixed(cell["median_error"].get<double>(), 4))
        << "\n";
  }
  out << "c_hat: "
      << (summary["c_hat"].is_null() ? std::string("-") : fixed(summary["c_hat"].get<double>(), 3))
      << "\n"
      << "wrote " << csv_path << " and " << json_path << "\n";
  return kExitSuccess;
}

}  // namespace halftest::cli
