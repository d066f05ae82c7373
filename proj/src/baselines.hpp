#pragma once

#include <memory>
#include <span>
#include <vector>

#include "predictor.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace expool {

// Multiplicative weights state: w_i <- w_i * (1 - epsilon * c_i).
struct MwState {
  std::vector<double> weights;
  double epsilon = 0.5;

  static MwState init(int experts, double epsilon);
  std::vector<double> distribution() const;
  void update(std::span<const double> costs);

  // Exact power-of-two rescale once the largest weight gets tiny; the
  // distribution is bit-for-bit unchanged.
  void rescale_if_needed();
};

// Deterministic total expected cost of multiplicative weights on the whole
// instance: sum over days of sum_i p_i * c_i.
double mw_expected_cost(const Instance& instance, double epsilon);

// Follow-the-perturbed-leader state: running totals of observed costs.
struct FplState {
  std::vector<double> cum_cost;
  double epsilon = 1.0;

  static FplState init(int experts, double epsilon);
  void accumulate(std::span<const double> costs);
};

// Fresh perturbation +-2r/epsilon per expert (r standard exponential, sign a
// fair coin); returns the argmin of perturbed totals, ties toward the
// smaller index.
int fpl_choose(const FplState& state, Rng& rng);

// Strict-majority answer among the pool members' predictions; exact ties
// broken by a fair coin.
int majority_vote(std::span<const std::uint8_t> predictions, std::span<const int> pool,
                  Rng& rng);

// Full-memory sequential predictor run on a small resident pool. The pooled
// algorithms re-initialize it whenever the pool is resampled.
class InnerPredictor {
 public:
  virtual ~InnerPredictor() = default;
  virtual void reset(int pool_size) = 0;
  virtual int choose(Rng& rng) = 0;  // position within the pool
  // Consumes the pool-restricted cost row; returns the day cost charged.
  virtual double observe(std::span<const double> pool_costs) = 0;
  virtual double beta() const = 0;          // expected-cost guarantee constant
  virtual int member_words() const = 0;     // persistent words per pool member
};

enum class InnerKind { mw_exact, mw_sampled, fpl };

double inner_beta(InnerKind kind);
std::unique_ptr<InnerPredictor> make_inner(InnerKind kind, double epsilon);

enum class MwMode { exact, sampled };

// Full-memory multiplicative weights baseline. Exact mode charges the exact
// per-day expectation and is deterministic; sampled mode follows one expert
// drawn from the weight distribution. Discrete input requires sampled mode
// (an actual answer must be emitted).
class MwPredictor : public Predictor {
 public:
  MwPredictor(int experts, double epsilon, MwMode mode, InputMode input,
              std::uint64_t seed);

  InputMode input_mode() const override { return input_; }
  void begin_day(const DayInput& in) override;
  Choice choose() override;
  double observe(const DayFeedback& fb) override;
  std::size_t words() const override { return meter_.current(); }
  std::size_t peak_words() const override { return meter_.peak(); }
  std::size_t words_ceiling() const override;
  void finish() override { log_.close(); }
  const std::vector<RoundRecord>& round_ledger() const override { return log_.records(); }

 private:
  MwState state_;
  MwMode mode_;
  InputMode input_;
  Rng rng_;
  MemoryMeter meter_;
  RoundLog log_;
  std::vector<std::uint8_t> day_preds_;  // transient copy of the day's predictions
  std::vector<double> scratch_costs_;
  int day_ = 0;
  int last_expert_ = -1;
  int last_answer_ = -1;
};

// Full-memory follow-the-perturbed-leader baseline.
class FplPredictor : public Predictor {
 public:
  FplPredictor(int experts, double epsilon, InputMode input, std::uint64_t seed);

  InputMode input_mode() const override { return input_; }
  void begin_day(const DayInput& in) override;
  Choice choose() override;
  double observe(const DayFeedback& fb) override;
  std::size_t words() const override { return meter_.current(); }
  std::size_t peak_words() const override { return meter_.peak(); }
  std::size_t words_ceiling() const override;
  void finish() override { log_.close(); }
  const std::vector<RoundRecord>& round_ledger() const override { return log_.records(); }

 private:
  FplState state_;
  InputMode input_;
  Rng rng_;
  MemoryMeter meter_;
  RoundLog log_;
  std::vector<std::uint8_t> day_preds_;
  std::vector<double> scratch_costs_;
  int day_ = 0;
  int last_expert_ = -1;
  int last_answer_ = -1;
};

}  // namespace expool
