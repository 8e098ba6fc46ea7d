#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "halftest/cli/commands.hpp"
#include "halftest/cli/config.hpp"

namespace {

using halftest::cli::ExperimentConfig;

// Flag values are kept as text and applied through the config parser, so a
// flag and a config-file line behave identically.
struct Overrides {
  std::string config_path;
  std::optional<std::string> d, n, epsilon, tau, seed, budget, threshold, adversary, marginal,
      out, trials, direction, holdout;
  bool timing = false;

  void attach(CLI::App& app, bool experiment_flags) {
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--epsilon", epsilon, "accuracy parameter in (0,1)");
    app.add_option("--tau", tau, "failure probability in (0,1)");
    app.add_option("--seed", seed, "64-bit master seed");
    if (!experiment_flags) return;
    app.add_option("--d", d, "dimension");
    app.add_option("--n", n, "sample size");
    app.add_option("--budget", budget, "label-noise budget(s), comma-separated");
    app.add_option("--threshold", threshold, "true threshold(s) t*, comma-separated");
    app.add_option("--adversary", adversary, "boundary | tail | random");
    app.add_option("--marginal", marginal, "gaussian | scaled:<f> | mixture:<s> | cube:<h>");
    app.add_option("--direction", direction, "true direction: e<k> or d comma-separated values");
    app.add_option("--out", out, "output path");
    app.add_option("--trials", trials, "trials per sweep cell");
    app.add_option("--holdout", holdout, "fresh points scoring each sweep trial");
    app.add_flag("--timing", timing, "record wall time per trial in the CSV");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c;
    if (!config_path.empty()) c = halftest::cli::load_config(config_path);
    auto apply = [&](const char* key, const std::optional<std::string>& v) {
      if (v) halftest::cli::set_field(c, key, *v);
    };
    apply("d", d);
    apply("n", n);
    apply("epsilon", epsilon);
    apply("tau", tau);
    apply("seed", seed);
    apply("budget", budget);
    apply("threshold", threshold);
    apply("adversary", adversary);
    apply("marginal", marginal);
    apply("direction", direction);
    apply("out", out);
    apply("trials", trials);
    apply("holdout", holdout);
    if (timing) c.timing = true;
    c.validate();
    return c;
  }
};

std::size_t worker_count() {
  const char* env = std::getenv("HALFTEST_WORKERS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) {
    throw halftest::Error("HALFTEST_WORKERS must be a positive integer");
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tester-learner for general halfspaces under Gaussian marginals"};
  app.require_subcommand(1);

  Overrides gen_flags, learn_flags, sweep_flags;
  std::string dataset;

  auto* gen = app.add_subcommand("gen", "generate a labeled dataset file");
  gen_flags.attach(*gen, true);

  auto* learn = app.add_subcommand("learn", "run the boosted tester-learner on a dataset file");
  learn->add_option("dataset", dataset, "dataset file")->required();
  learn_flags.attach(*learn, false);

  auto* sweep = app.add_subcommand("sweep", "run the opt x t* experiment grid");
  sweep_flags.attach(*sweep, true);

  auto* selftest = app.add_subcommand("selftest", "run the built-in property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : halftest::cli::kExitUsage;
  }

  try {
    if (gen->parsed()) return halftest::cli::cmd_gen(gen_flags.resolve(), std::cout);
    if (learn->parsed()) {
      return halftest::cli::cmd_learn(dataset, learn_flags.resolve(), std::cout);
    }
    if (sweep->parsed()) {
      return halftest::cli::cmd_sweep(sweep_flags.resolve(), worker_count(), std::cout);
    }
    if (selftest->parsed()) return halftest::cli::cmd_selftest(std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return halftest::cli::kExitUsage;
  }
  return halftest::cli::kExitUsage;
}
