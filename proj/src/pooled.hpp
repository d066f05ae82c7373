#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "baselines.hpp"
#include "predictor.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace expool {

// Thrown when a parameter combination violates a guarantee's lower bound on
// delta (the derived pool size would exceed n).
struct PremiseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a run-time invariant check fails; trials abort loudly rather
// than produce a wrong table row.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

// Parameters of the discrete-cost elimination-pool algorithm.
struct Alg3Params {
  int experts = 0;
  int days = 0;
  double delta = 0.0;
  int k = 0;                    // ceil(16 n log2^2(n) / (T delta))
  double elim_threshold = 0.0;  // delta / (8 log2 n)

  static Alg3Params make(int experts, int days, double delta,
                         std::optional<int> k_override = std::nullopt);
};

// Per-round mistake ceiling: (end - start) * delta / 2 + 4 log2 n.
double round_mistake_bound(const RoundRecord& round, double delta, int experts);

// Elimination pool with majority vote. Keeps a pool of at most k expert
// indices; a member whose mistake fraction since the round anchor exceeds
// delta / (8 log2 n) is dropped after the day's outcome; an emptied pool is
// resampled uniformly and first votes the next day.
class DiscretePoolPredictor : public Predictor {
 public:
  DiscretePoolPredictor(const Alg3Params& params, std::uint64_t seed,
                        MemoryMeter* meter = nullptr);
  ~DiscretePoolPredictor() override;

  InputMode input_mode() const override { return InputMode::discrete; }
  void begin_day(const DayInput& in) override;
  Choice choose() override;
  double observe(const DayFeedback& fb) override;
  std::size_t words() const override { return meter_->current(); }
  std::size_t peak_words() const override { return meter_->peak(); }
  std::size_t words_ceiling() const override {
    return 2 * static_cast<std::size_t>(params_.k) + 8;
  }
  void finish() override { log_.close(); }
  const std::vector<RoundRecord>& round_ledger() const override { return log_.records(); }

  const Alg3Params& params() const { return params_; }
  const std::vector<int>& pool() const { return pool_; }
  const std::vector<int>& mistakes_since_anchor() const { return mistakes_; }
  int anchor() const { return anchor_u_; }
  int round_index() const { return round_index_; }

 private:
  void resample(int anchor_day);

  Alg3Params params_;
  Rng rng_;
  MemoryMeter* meter_;
  MemoryMeter own_meter_;
  std::size_t charged_ = 0;
  RoundLog log_;
  std::vector<int> pool_;
  std::vector<int> mistakes_;
  std::vector<std::uint8_t> day_preds_;  // pool-restricted, transient
  int anchor_u_ = 1;
  int day_ = 0;
  int round_index_ = 1;
  int vote_ = -1;
};

// Test fixture: the lax variant that eliminates members whose mistake
// fraction since the round anchor exceeds delta / 4, with no log-n
// tightening and ties resolved to answer 0. Kept only to demonstrate the
// error build-up failure mode; it carries no guarantee.
struct NaiveQuarterParams {
  int experts = 0;
  double delta = 0.0;
  int k = 0;  // defaults to n

  static NaiveQuarterParams make(int experts, double delta,
                                 std::optional<int> k_override = std::nullopt);
};

class NaiveQuarterPredictor : public Predictor {
 public:
  NaiveQuarterPredictor(const NaiveQuarterParams& params, std::uint64_t seed);

  InputMode input_mode() const override { return InputMode::discrete; }
  void begin_day(const DayInput& in) override;
  Choice choose() override;
  double observe(const DayFeedback& fb) override;
  std::size_t words() const override { return meter_.current(); }
  std::size_t peak_words() const override { return meter_.peak(); }
  std::size_t words_ceiling() const override {
    return 2 * static_cast<std::size_t>(params_.k) + 8;
  }
  void finish() override { log_.close(); }
  const std::vector<RoundRecord>& round_ledger() const override { return log_.records(); }

  const std::vector<int>& pool() const { return pool_; }

 private:
  void resample(int anchor_day);

  NaiveQuarterParams params_;
  Rng rng_;
  MemoryMeter meter_;
  RoundLog log_;
  std::vector<int> pool_;
  std::vector<int> mistakes_;
  std::vector<std::uint8_t> day_preds_;
  int anchor_u_ = 1;
  int day_ = 0;
  int vote_ = -1;
};

// Brute-force scan for the deletion-condition oracle: returns every day t
// (0-based) for which some window [t, e] has the expert's average cost
// strictly above `threshold`.
std::vector<int> bad_days_oracle(const Instance& instance, int expert, double threshold);

// Parameters of the general-cost pool algorithm with a black-box sequential
// predictor.
struct Alg4Params {
  int experts = 0;
  int days = 0;
  double delta = 0.0;
  double beta = 1.0;
  int k = 0;                       // ceil(16 beta n ln(n) ln(T) / (T delta))
  double inner_epsilon = 0.5;
  double resample_threshold = 0.0;  // delta / 8 unless overridden

  static Alg4Params make(int experts, int days, double delta, double beta,
                         std::optional<int> k_override = std::nullopt,
                         std::optional<double> threshold_override = std::nullopt);
};

// Pool algorithm for costs in [0, 1]: the inner sequential predictor picks
// among the resident pool each day; when every member's average cost since
// the round anchor exceeds the threshold, the whole pool is resampled and
// the inner predictor re-initialized. Members are never dropped
// individually.
class GeneralPoolPredictor : public Predictor {
 public:
  GeneralPoolPredictor(const Alg4Params& params, InnerKind inner, std::uint64_t seed,
                       MemoryMeter* meter = nullptr);
  ~GeneralPoolPredictor() override;

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

  const Alg4Params& params() const { return params_; }
  const std::vector<int>& pool() const { return pool_; }
  const std::vector<double>& cost_since_anchor() const { return cost_since_u_; }
  int anchor() const { return anchor_u_; }
  int round_index() const { return round_index_; }

 private:
  void resample(int anchor_day);

  Alg4Params params_;
  std::unique_ptr<InnerPredictor> inner_;
  Rng rng_;
  MemoryMeter* meter_;
  MemoryMeter own_meter_;
  std::size_t charged_ = 0;
  RoundLog log_;
  std::vector<int> pool_;
  std::vector<double> cost_since_u_;
  std::vector<double> pool_costs_;  // transient
  int anchor_u_ = 1;
  int day_ = 0;
  int round_index_ = 1;
};

}  // namespace expool
