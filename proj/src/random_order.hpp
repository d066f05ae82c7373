#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "pooled.hpp"
#include "predictor.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace expool {

// Resample cutoff for the random-order pool: a pool survives as long as some
// member's cumulative cost since the anchor stays within
// (M_est / T) * (t - u) + 4 sqrt((t - u) ln T).
double alg5_threshold(double m_estimate, int days, int t, int u);

// Parameters of the random-order pool algorithm (cost estimate known).
struct Alg5Params {
  int experts = 0;
  int days = 0;
  double delta = 0.0;
  double m_estimate = 0.0;
  int k = 0;                   // ceil(k_const n log2^2(n) / (delta^2 T)), clamped to [1, n]
  double inner_epsilon = 0.0;  // delta / 2
  double k_const = 16.0;

  static Alg5Params make(int experts, int days, double delta, double m_estimate,
                         double k_const = 16.0,
                         std::optional<int> k_override = std::nullopt);
};

// Pool algorithm for random-order streams. The pool is resampled only when
// every member's cumulative cost since the anchor exceeds the
// alg5_threshold cutoff; the inner predictor runs at epsilon = delta / 2.
class RandomOrderPoolPredictor : public Predictor {
 public:
  // `force_first_member`, when set, is placed into the initial pool (the
  // remaining members are drawn from the other indices); used by retention
  // experiments.
  RandomOrderPoolPredictor(const Alg5Params& params, InnerKind inner, std::uint64_t seed,
                           MemoryMeter* meter = nullptr,
                           std::optional<int> force_first_member = std::nullopt);
  ~RandomOrderPoolPredictor() override;

  InputMode input_mode() const override { return InputMode::continuous; }
  void begin_day(const DayInput& in) override;
  Choice choose() override;
  double observe(const DayFeedback& fb) override;
  std::size_t words() const override { return meter_->current(); }
  std::size_t peak_words() const override { return meter_->peak(); }
  std::size_t words_ceiling() const override {
    return 3 * static_cast<std::size_t>(params_.k) + 12;
  }
  void finish() override { log_.close(); }
  const std::vector<RoundRecord>& round_ledger() const override { return log_.records(); }

  const Alg5Params& params() const { return params_; }
  const std::vector<int>& pool() const { return pool_; }
  const std::vector<double>& cost_since_anchor() const { return cost_since_u_; }
  int anchor() const { return anchor_u_; }
  int resample_count() const { return resamples_; }

  // Smallest average cost over any member's pool tenure so far (open pool
  // included once it has observed at least one day). Tenures are the only
  // cost views available within the memory budget.
  double min_tenure_avg() const;

 private:
  void resample(int anchor_day);

  Alg5Params params_;
  std::unique_ptr<InnerPredictor> inner_;
  Rng rng_;
  MemoryMeter* meter_;
  MemoryMeter own_meter_;
  std::size_t charged_ = 0;
  RoundLog log_;
  std::vector<int> pool_;
  std::vector<double> cost_since_u_;
  std::vector<double> pool_costs_;
  int anchor_u_ = 1;
  int day_ = 0;
  int observed_since_u_ = 0;
  int resamples_ = 0;
  double min_closed_tenure_avg_ = 0.0;
  bool has_closed_tenure_ = false;
};

// One binary-search step of the average-cost estimate: compares the current
// guess against the epoch's best observed average and moves it by 2^-(j+1).
double estimator_gamma_step(double gamma, int epoch_index, double epoch_best_avg,
                            double delta);

// Epoch layout of the estimate-then-run procedure.
struct EstimatorParams {
  int experts = 0;
  int days = 0;
  double delta = 0.0;
  int ell = 0;        // ceil(2 log2(1/delta)) epochs
  int epoch_len = 0;  // floor(delta T / (2 log2(1/delta)))
  double k_const = 16.0;

  static EstimatorParams make(int experts, int days, double delta, double k_const = 16.0);
};

// Random-order algorithm without a known best-expert cost: runs ell
// calibration epochs (pool algorithm at target regret 1/100, estimate
// gamma * epoch length), updates gamma per epoch from the best tenure
// average, then runs the remaining days at the target regret with
// gamma * remaining as the estimate.
class EstimatedMPredictor : public Predictor {
 public:
  EstimatedMPredictor(const EstimatorParams& params, InnerKind inner, std::uint64_t seed);

  InputMode input_mode() const override { return InputMode::continuous; }
  void begin_day(const DayInput& in) override;
  Choice choose() override;
  double observe(const DayFeedback& fb) override;
  std::size_t words() const override { return meter_.current(); }
  std::size_t peak_words() const override { return meter_.peak(); }
  std::size_t words_ceiling() const override {
    return 3 * static_cast<std::size_t>(max_k_) + 16;
  }
  void finish() override;
  const std::vector<RoundRecord>& round_ledger() const override { return ledger_; }

  double gamma() const { return gamma_; }
  int epochs() const { return params_.ell; }
  int max_pool_capacity() const { return max_k_; }
  const std::vector<double>& epoch_best_averages() const { return epoch_best_avgs_; }

 private:
  void start_phase();
  void close_phase();

  EstimatorParams params_;
  InnerKind inner_kind_;
  Rng rng_;
  MemoryMeter meter_;
  std::vector<RoundRecord> ledger_;
  std::unique_ptr<RandomOrderPoolPredictor> phase_;
  std::vector<double> epoch_best_avgs_;
  double gamma_ = 0.5;
  int epoch_index_ = 1;  // 1..ell, then ell+1 for the final run
  int phase_start_day_ = 1;
  int days_in_phase_ = 0;
  int day_ = 0;
  int max_k_ = 0;
};

struct PermutationCheck {
  bool ok = true;
  std::string detail;
};

// Verifies that `shuffled` is a day-reordering of `base`: equal day
// multisets, expert columns untouched within each day.
PermutationCheck permutation_check(const Instance& base, const Instance& shuffled);

}  // namespace expool
