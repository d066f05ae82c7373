#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "reduction.hpp"
#include "types.hpp"

namespace expool {

// Published substream tags: a trial's seed is derive_seed(base_seed, index),
// and the generator / predictor / mask streams are derived from it with
// these tags, so concurrent execution cannot change any draw.
constexpr std::uint64_t kGenStreamTag = 0x67656eull;
constexpr std::uint64_t kAlgStreamTag = 0x616c67ull;
constexpr std::uint64_t kMaskStreamTag = 0x6d61736bull;
constexpr std::uint64_t kPlantStreamTag = 0x706c616e74ull;

inline std::uint64_t trial_seed(std::uint64_t base_seed, int trial_index) {
  return derive_seed(base_seed, static_cast<std::uint64_t>(trial_index));
}

// Runs one seeded trial: materializes the stream, drives the predictor
// through the day loop, and evaluates the run-time invariants (per-round
// mistake bound, retention, memory ceiling) inline. Throws on any violation.
TrialReport run_trial(const ExperimentConfig& config, int trial_index);

enum class FailKind { none, premise, invariant, other };

struct TrialRow {
  TrialReport report;
  bool ok = false;
  FailKind kind = FailKind::none;
  std::string error;
};

struct AggregateReport {
  int trials = 0;
  int failures = 0;
  int in_premise = 0;
  double mean_regret = 0.0;
  double median_regret = 0.0;
  double p10_regret = 0.0;
  double p90_regret = 0.0;
  double frac_within_delta = 0.0;
  double mean_rounds = 0.0;
  std::size_t max_peak_words = 0;
  bool failed = false;  // any trial aborted on an invariant or error
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRow> rows;
  AggregateReport aggregate;

  std::string csv() const;
  void write_csv(const std::string& path) const;
  std::string summary() const;
};

// Runs config.trials seeded trials (concurrently when threads allow; the
// result table is ordered by trial index and identical either way).
ExperimentResult run_experiment(const ExperimentConfig& config);

struct FrontierRow {
  double delta = 0.0;
  int k = 0;
  std::size_t max_peak_words = 0;
  double mean_regret = 0.0;
};

struct FrontierResult {
  std::vector<FrontierRow> rows;
  std::string csv() const;
  void write_csv(const std::string& path) const;
};

// Sweeps the pooled algorithm over the given deltas, exposing the pool-size
// and memory scaling; every delta must satisfy the algorithm's premise.
FrontierResult memory_frontier(const ExperimentConfig& base,
                               const std::vector<double>& deltas);

struct ReduceRow {
  bool yes_case = false;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  int decision = 0;
  bool correct = false;
};

struct ReduceResult {
  ReductionParams params;
  std::vector<ReduceRow> rows;
  double mean_accuracy = 0.0;
  int correct_count = 0;

  std::string csv() const;
  void write_csv(const std::string& path) const;
};

// Masked detection experiment: per trial, draws the detection input for the
// requested case, runs the weight-based oracle through the masked stream,
// and records the thresholded decision. `offset_override` replaces the
// default planted bias delta*(c+1); `oracle_epsilon` replaces the default
// sqrt(ln n / T) learning rate.
ReduceResult run_reduce_experiment(bool yes_case, double delta,
                                   std::optional<double> offset_override, int experts,
                                   int days, int trials, std::uint64_t base_seed,
                                   std::optional<double> oracle_epsilon = std::nullopt);

}  // namespace expool
