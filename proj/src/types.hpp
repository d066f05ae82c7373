#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace expool {

enum class CostKind { discrete, continuous };

// Cost model of an instance. `width` is the upper end of the raw cost range
// [0, width] in continuous mode; costs are stored normalized to [0, 1].
struct CostModel {
  CostKind kind = CostKind::discrete;
  double width = 1.0;
};

// A full prediction-with-experts input: n experts, T days, plus either the
// per-day binary predictions and outcomes (discrete) or per-day cost rows
// (continuous, normalized). Immutable after construction; safe to share
// across concurrently running trials.
class Instance {
 public:
  static Instance discrete(int experts, std::vector<std::uint8_t> predictions,
                           std::vector<std::uint8_t> outcomes);
  // `raw_costs` is T*n row-major in original units [0, width].
  static Instance continuous(int experts, double width, std::vector<double> raw_costs);

  int experts() const { return n_; }
  int days() const { return days_; }
  const CostModel& cost_model() const { return model_; }

  // Day indices are 0-based here; ledgers and reports use 1-based days.
  std::span<const std::uint8_t> predictions(int day) const {
    check_day(day);
    if (model_.kind != CostKind::discrete)
      throw std::logic_error("Instance::predictions: continuous instance has no predictions");
    return {predictions_.data() + static_cast<std::size_t>(day) * n_,
            static_cast<std::size_t>(n_)};
  }

  int outcome(int day) const {
    check_day(day);
    if (model_.kind != CostKind::discrete)
      throw std::logic_error("Instance::outcome: continuous instance has no outcomes");
    return outcomes_[static_cast<std::size_t>(day)];
  }

  // Normalized cost of expert `i` on `day`. In discrete mode this is the
  // mistake indicator derived from prediction vs outcome.
  double cost(int day, int i) const {
    check_day(day);
    if (i < 0 || i >= n_) throw std::out_of_range("Instance::cost: expert index");
    if (model_.kind == CostKind::discrete) {
      const std::size_t base = static_cast<std::size_t>(day) * n_;
      return predictions_[base + static_cast<std::size_t>(i)] ==
                     outcomes_[static_cast<std::size_t>(day)]
                 ? 0.0
                 : 1.0;
    }
    return costs_[static_cast<std::size_t>(day) * n_ + static_cast<std::size_t>(i)];
  }

  // Fills `out` (length n) with the day's normalized cost row.
  void fill_costs(int day, std::span<double> out) const;

  void write(std::ostream& os) const;
  static Instance read(std::istream& is);
  void write_file(const std::string& path) const;
  static Instance read_file(const std::string& path);

 private:
  Instance() = default;
  void check_day(int day) const {
    if (day < 0 || day >= days_) throw std::out_of_range("Instance: day index");
  }

  CostModel model_;
  int n_ = 0;
  int days_ = 0;
  std::vector<std::uint8_t> predictions_;  // discrete, T*n
  std::vector<std::uint8_t> outcomes_;     // discrete, T
  std::vector<double> costs_;              // continuous, T*n, normalized
};

struct BestExpert {
  int index = 0;
  double total_cost = 0.0;  // normalized units
};

// Minimum cumulative normalized cost over experts; smallest index on ties.
BestExpert best_expert_cost(const Instance& instance);

// Average regret (alg_cost - best_cost) / days; may be negative.
double regret_of(double alg_cost, double best_cost, int days);

// Word-level memory accounting. One word charges one expert index, one
// counter, or one weight.
class MemoryMeter {
 public:
  void charge(std::ptrdiff_t delta_words) {
    const std::ptrdiff_t next = static_cast<std::ptrdiff_t>(current_) + delta_words;
    if (next < 0)
      throw std::logic_error("MemoryMeter: charge would make current negative");
    current_ = static_cast<std::size_t>(next);
    if (current_ > peak_) peak_ = current_;
  }
  std::size_t current() const { return current_; }
  std::size_t peak() const { return peak_; }

 private:
  std::size_t current_ = 0;
  std::size_t peak_ = 0;
};

// One pool lifetime (baselines report a single round spanning the run).
// Days are 1-based; `start_day` is the round's anchor time and `end_day`
// the last day on which the round's pool predicted.
struct RoundRecord {
  int start_day = 0;
  int end_day = 0;
  double cost = 0.0;  // algorithm cost accrued during the round
};

struct TrialReport {
  double alg_cost = 0.0;   // normalized units
  double best_cost = 0.0;  // normalized units
  double regret = 0.0;     // (alg_cost - best_cost) / days
  int rounds = 0;
  std::size_t peak_words = 0;
  std::vector<RoundRecord> round_ledger;

  int best_index = 0;
  int experts = 0;
  int days = 0;
  double width = 1.0;
  int pool_capacity = 0;  // k for pooled algorithms, 0 for full-memory baselines
  std::uint64_t seed = 0;
  int trial_index = 0;
  bool in_premise = true;
};

}  // namespace expool
