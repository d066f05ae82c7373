#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "types.hpp"

namespace expool {

enum class InputMode { discrete, continuous };

// What a predictor sees at the start of a day: the expert predictions in
// discrete mode, nothing in continuous mode.
struct DayInput {
  std::span<const std::uint8_t> predictions;
};

// End-of-day feedback: the correct answer in discrete mode, the full
// normalized cost row in continuous mode.
struct DayFeedback {
  int outcome = -1;
  std::span<const double> costs;
};

struct Choice {
  int expert = -1;  // continuous mode: index of the followed expert
  int answer = -1;  // discrete mode: the predicted answer
};

// Contract every predictor implements. The driver calls begin_day, choose,
// observe once per day, in stream order: predictions are visible before the
// outcome, never together with it. observe returns the day's cost charged to
// the algorithm (a realized cost, or an exact expectation for deterministic
// variants). words() reports persistent cross-day state only; per-day input
// buffers are released by the end of observe and are not charged.
class Predictor {
 public:
  virtual ~Predictor() = default;

  virtual InputMode input_mode() const = 0;
  virtual void begin_day(const DayInput& in) = 0;
  virtual Choice choose() = 0;
  virtual double observe(const DayFeedback& fb) = 0;

  virtual std::size_t words() const = 0;
  virtual std::size_t peak_words() const = 0;
  // Documented upper bound on peak_words for this configuration.
  virtual std::size_t words_ceiling() const = 0;

  // Closes the open round; call once after the last day.
  virtual void finish() = 0;
  virtual const std::vector<RoundRecord>& round_ledger() const = 0;
};

// Ledger helper shared by predictor implementations.
class RoundLog {
 public:
  void open(int start_day) {
    open_ = true;
    start_ = start_day;
    last_ = start_day;
    cost_ = 0.0;
  }
  void vote(int day, double cost) {
    last_ = day;
    cost_ += cost;
  }
  void close() {
    if (!open_) return;
    records_.push_back({start_, last_, cost_});
    open_ = false;
  }
  const std::vector<RoundRecord>& records() const { return records_; }
  double open_cost() const { return cost_; }

 private:
  std::vector<RoundRecord> records_;
  bool open_ = false;
  int start_ = 0;
  int last_ = 0;
  double cost_ = 0.0;
};

}  // namespace expool
