#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "halftest/core/dataset.hpp"
#include "halftest/learner/pipeline.hpp"
#include "halftest/synth/generate.hpp"

namespace halftest::learner {

/// Where boosted_learn gets its independent samples from.
class SampleSource {
 public:
  virtual ~SampleSource() = default;
  /// Called once before any sample is requested.
  virtual void prepare(std::size_t trials, std::size_t selection_size) = 0;
  virtual LabeledDataset trial_sample(std::size_t trial) = 0;
  virtual LabeledDataset selection_sample() = 0;
};

/// Fresh synthetic data per request, seeded by position.
class GeneratorSource : public SampleSource {
 public:
  GeneratorSource(std::size_t d, std::size_t n, synth::Marginal marginal, Halfspace truth,
                  synth::NoiseProfile noise, std::uint64_t seed);
  void prepare(std::size_t trials, std::size_t selection_size) override;
  LabeledDataset trial_sample(std::size_t trial) override;
  LabeledDataset selection_sample() override;

 private:
  std::size_t d_, n_;
  synth::Marginal marginal_;
  Halfspace truth_;
  synth::NoiseProfile noise_;
  std::uint64_t seed_;
  std::size_t selection_size_ = 0;
};

/// One fixed dataset carved into a selection chunk (at most a fifth of it)
/// and `trials` equal disjoint chunks, in file order.
class DatasetSource : public SampleSource {
 public:
  explicit DatasetSource(LabeledDataset data);
  void prepare(std::size_t trials, std::size_t selection_size) override;
  LabeledDataset trial_sample(std::size_t trial) override;
  LabeledDataset selection_sample() override;

 private:
  LabeledDataset data_;
  std::size_t selection_size_ = 0;
  std::size_t chunk_ = 0;
};

constexpr std::size_t kMaxBoostTrials = 200;
constexpr double kSelectionConstant = 20.0;

/// ⌈10·log(1/τ)⌉, capped at kMaxBoostTrials.
std::size_t boost_trials(double tau);
/// ⌈20·d·log(log(1/τ) + e)/ε²⌉.
std::size_t boost_selection_size(std::size_t d, double epsilon, double tau);

struct BoostOutcome {
  LearnOutcome final;  // chosen hypothesis and its selection error
  std::size_t planned_trials = 0;
  bool trials_capped = false;
  std::size_t trials_run = 0;
  std::size_t trials_rejected = 0;
  std::vector<LearnOutcome> trials;
};

/// Runs testable_learn on independent samples; rejects iff more than half
/// of the planned trials reject (stopping as soon as that is certain),
/// otherwise selects among the trial winners on a fresh selection sample.
BoostOutcome boosted_learn(SampleSource& source, std::size_t d, const LearnConfig& config);

}  // namespace halftest::learner
