#include "halftest/learner/boosting.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "halftest/core/rng.hpp"

namespace halftest::learner {

GeneratorSource::GeneratorSource(std::size_t d, std::size_t n, synth::Marginal marginal,
                                 Halfspace truth, synth::NoiseProfile noise, std::uint64_t seed)
    : d_(d), n_(n), marginal_(marginal), truth_(std::move(truth)), noise_(noise), seed_(seed) {}

void GeneratorSource::prepare(std::size_t, std::size_t selection_size) {
  selection_size_ = selection_size;
}

LabeledDataset GeneratorSource::trial_sample(std::size_t trial) {
  return synth::generate(d_, n_, marginal_, truth_, noise_,
                         derive_seed(seed_, StreamRole::BoostTrial, trial))
      .data;
}

LabeledDataset GeneratorSource::selection_sample() {
  return synth::generate(d_, selection_size_, marginal_, truth_, noise_,
                         derive_seed(seed_, StreamRole::BoostSelect))
      .data;
}

DatasetSource::DatasetSource(LabeledDataset data) : data_(std::move(data)) {}

void DatasetSource::prepare(std::size_t trials, std::size_t selection_size) {
  if (trials == 0) throw Error("DatasetSource: zero trials");
  selection_size_ = std::min(selection_size, data_.size() / 5);
  chunk_ = (data_.size() - selection_size_) / trials;
  if (chunk_ == 0 || selection_size_ == 0) {
    throw Error("dataset of " + std::to_string(data_.size()) + " points is too small for " +
                std::to_string(trials) + " boosting trials");
  }
}

LabeledDataset DatasetSource::trial_sample(std::size_t trial) {
  std::vector<std::size_t> idx(chunk_);
  const std::size_t start = selection_size_ + trial * chunk_;
  for (std::size_t i = 0; i < chunk_; ++i) idx[i] = start + i;
  return data_.subset(idx);
}

LabeledDataset DatasetSource::selection_sample() { return data_.prefix(selection_size_); }

std::size_t boost_trials(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error("tau must lie in (0,1)");
  const double t = std::ceil(10.0 * std::log(1.0 / tau) - 1e-9);
  return t > static_cast<double>(kMaxBoostTrials) ? kMaxBoostTrials
                                                  : std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

std::size_t boost_selection_size(std::size_t d, double epsilon, double tau) {
  const double loglog = std::log(std::log(1.0 / tau) + std::numbers::e);
  return static_cast<std::size_t>(
      std::ceil(kSelectionConstant * static_cast<double>(d) * loglog / (epsilon * epsilon)));
}

BoostOutcome boosted_learn(SampleSource& source, std::size_t d, const LearnConfig& config) {
  config.validate();
  BoostOutcome out;
  out.planned_trials = boost_trials(config.tau);
  out.trials_capped = std::ceil(10.0 * std::log(1.0 / config.tau) - 1e-9) >
                      static_cast<double>(kMaxBoostTrials);
  source.prepare(out.planned_trials, boost_selection_size(d, config.epsilon, config.tau));

  const std::size_t reject_limit = out.planned_trials / 2;  // reject iff rejections > T/2
  for (std::size_t i = 0; i < out.planned_trials; ++i) {
    LearnConfig trial_config = config;
    trial_config.seed = derive_seed(config.seed, StreamRole::BoostTrial, i);
    out.trials.push_back(testable_learn(source.trial_sample(i), trial_config));
    ++out.trials_run;
    if (!out.trials.back().accepted) ++out.trials_rejected;
    if (out.trials_rejected > reject_limit) break;
  }

  if (out.trials_rejected > reject_limit) {
    for (const auto& t : out.trials) {
      if (!t.rejection) continue;
      Rejection r = *t.rejection;
      r.detail += " (first of " + std::to_string(out.trials_rejected) + " rejected trials, " +
                  std::to_string(out.planned_trials) + " planned)";
      out.final.rejection = std::move(r);
      break;
    }
    return out;
  }

  const LabeledDataset selection = source.selection_sample();
  std::optional<Halfspace> best;
  std::size_t best_mistakes = std::numeric_limits<std::size_t>::max();
  double best_abs = 0.0;
  std::size_t considered = 0;
  for (const auto& t : out.trials) {
    if (!t.accepted || !t.chosen) continue;
    ++considered;
    std::size_t mistakes = 0;
    for (std::size_t j = 0; j < selection.size(); ++j) {
      if (evaluate(*t.chosen, selection.x(j)) != selection.y(j)) ++mistakes;
    }
    const double abs_t = std::abs(t.chosen->threshold());
    if (!best || mistakes < best_mistakes || (mistakes == best_mistakes && abs_t < best_abs)) {
      best = t.chosen;
      best_mistakes = mistakes;
      best_abs = abs_t;
    }
  }
  out.final.accepted = true;
  out.final.chosen = best;
  out.final.hypotheses_considered = considered;
  out.final.select_size = selection.size();
  out.final.selection_error =
      static_cast<double>(best_mistakes) / static_cast<double>(selection.size());
  return out;
}

}  // namespace halftest::learner
