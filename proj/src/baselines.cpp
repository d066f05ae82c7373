#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace expool {

namespace {

constexpr double kRescaleFloor = 0x1.0p-500;
constexpr double kRescaleFactor = 0x1.0p+500;

void check_costs01(std::span<const double> costs) {
  for (double c : costs)
    if (!(c >= 0.0 && c <= 1.0))
      throw std::invalid_argument("costs must lie in [0, 1]");
}

}  // namespace

MwState MwState::init(int experts, double epsilon) {
  if (experts < 1) throw std::invalid_argument("mw: expert count must be positive");
  if (!(epsilon > 0.0 && epsilon <= 0.5))
    throw std::invalid_argument("mw: epsilon must lie in (0, 1/2]");
  MwState s;
  s.weights.assign(static_cast<std::size_t>(experts), 1.0);
  s.epsilon = epsilon;
  return s;
}

std::vector<double> MwState::distribution() const {
  if (weights.empty()) throw std::invalid_argument("mw: empty expert set");
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> p(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) p[i] = weights[i] / total;
  return p;
}

void MwState::update(std::span<const double> costs) {
  if (costs.size() != weights.size())
    throw std::invalid_argument("mw: cost row length must match expert count");
  check_costs01(costs);
  for (std::size_t i = 0; i < weights.size(); ++i)
    weights[i] *= 1.0 - epsilon * costs[i];
}

void MwState::rescale_if_needed() {
  double mx = 0.0;
  for (double w : weights) mx = std::max(mx, w);
  if (mx >= kRescaleFloor || mx == 0.0) return;
  for (double& w : weights) w *= kRescaleFactor;
}

double mw_expected_cost(const Instance& instance, double epsilon) {
  MwState state = MwState::init(instance.experts(), epsilon);
  std::vector<double> costs(static_cast<std::size_t>(instance.experts()));
  double total = 0.0;
  for (int t = 0; t < instance.days(); ++t) {
    instance.fill_costs(t, costs);
    const std::vector<double> p = state.distribution();
    double day = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) day += p[i] * costs[i];
    total += day;
    state.update(costs);
    state.rescale_if_needed();
  }
  return total;
}

FplState FplState::init(int experts, double epsilon) {
  if (experts < 1) throw std::invalid_argument("fpl: expert count must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("fpl: epsilon must lie in (0, 1]");
  FplState s;
  s.cum_cost.assign(static_cast<std::size_t>(experts), 0.0);
  s.epsilon = epsilon;
  return s;
}

void FplState::accumulate(std::span<const double> costs) {
  if (costs.size() != cum_cost.size())
    throw std::invalid_argument("fpl: cost row length must match expert count");
  check_costs01(costs);
  for (std::size_t i = 0; i < cum_cost.size(); ++i) cum_cost[i] += costs[i];
}

int fpl_choose(const FplState& state, Rng& rng) {
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.cum_cost.size(); ++i) {
    const double r = rng.exponential();
    const double magnitude = 2.0 * r / state.epsilon;
    const double perturbation = rng.next_bit() ? magnitude : -magnitude;
    const double val = state.cum_cost[i] + perturbation;
    if (val < best_val) {
      best_val = val;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int majority_vote(std::span<const std::uint8_t> predictions, std::span<const int> pool,
                  Rng& rng) {
  if (pool.empty()) throw std::invalid_argument("majority_vote: empty pool");
  int ones = 0;
  for (int i : pool) {
    if (i < 0 || static_cast<std::size_t>(i) >= predictions.size())
      throw std::out_of_range("majority_vote: pool index outside prediction row");
    ones += predictions[static_cast<std::size_t>(i)];
  }
  const int zeros = static_cast<int>(pool.size()) - ones;
  if (ones > zeros) return 1;
  if (zeros > ones) return 0;
  return rng.next_bit();
}

// ---------------------------------------------------------------------------
// Inner predictors for the pooled algorithms.

namespace {

class MwInner : public InnerPredictor {
 public:
  MwInner(double epsilon, bool exact) : epsilon_(epsilon), exact_(exact) {}

  void reset(int pool_size) override { state_ = MwState::init(pool_size, epsilon_); }

  int choose(Rng& rng) override {
    const std::vector<double> p = state_.distribution();
    if (exact_) {
      // Deterministic representative; the charged cost is the expectation.
      int arg = 0;
      for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[static_cast<std::size_t>(arg)]) arg = static_cast<int>(i);
      last_ = arg;
      return arg;
    }
    const double u = rng.next_double();
    double acc = 0.0;
    int pick = static_cast<int>(p.size()) - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) {
        pick = static_cast<int>(i);
        break;
      }
    }
    last_ = pick;
    return pick;
  }

  double observe(std::span<const double> pool_costs) override {
    double day;
    if (exact_) {
      const std::vector<double> p = state_.distribution();
      day = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) day += p[i] * pool_costs[i];
    } else {
      day = pool_costs[static_cast<std::size_t>(last_)];
    }
    state_.update(pool_costs);
    state_.rescale_if_needed();
    return day;
  }

  double beta() const override { return 1.0; }
  int member_words() const override { return 1; }  // one weight per member

 private:
  double epsilon_;
  bool exact_;
  MwState state_;
  int last_ = 0;
};

class FplInner : public InnerPredictor {
 public:
  explicit FplInner(double epsilon) : epsilon_(epsilon) {}

  void reset(int pool_size) override { state_ = FplState::init(pool_size, epsilon_); }

  int choose(Rng& rng) override {
    last_ = fpl_choose(state_, rng);
    return last_;
  }

  double observe(std::span<const double> pool_costs) override {
    const double day = pool_costs[static_cast<std::size_t>(last_)];
    state_.accumulate(pool_costs);
    return day;
  }

  double beta() const override { return 16.0; }
  int member_words() const override { return 1; }  // one running total per member

 private:
  double epsilon_;
  FplState state_;
  int last_ = 0;
};

}  // namespace

double inner_beta(InnerKind kind) { return kind == InnerKind::fpl ? 16.0 : 1.0; }

std::unique_ptr<InnerPredictor> make_inner(InnerKind kind, double epsilon) {
  switch (kind) {
    case InnerKind::mw_exact:
      return std::make_unique<MwInner>(epsilon, true);
    case InnerKind::mw_sampled:
      return std::make_unique<MwInner>(epsilon, false);
    case InnerKind::fpl:
      return std::make_unique<FplInner>(epsilon);
  }
  throw std::logic_error("make_inner: unknown kind");
}

// ---------------------------------------------------------------------------
// Baseline predictors.

MwPredictor::MwPredictor(int experts, double epsilon, MwMode mode, InputMode input,
                         std::uint64_t seed)
    : state_(MwState::init(experts, epsilon)),
      mode_(mode),
      input_(input),
      rng_(seed),
      scratch_costs_(static_cast<std::size_t>(experts)) {
  if (input_ == InputMode::discrete && mode_ == MwMode::exact)
    throw std::invalid_argument("mw: discrete input requires sampled mode");
  meter_.charge(experts + 2);  // weights + epsilon + day counter
  log_.open(1);
}

void MwPredictor::begin_day(const DayInput& in) {
  ++day_;
  if (input_ == InputMode::discrete) {
    if (in.predictions.size() != state_.weights.size())
      throw std::invalid_argument("mw: prediction row length must match expert count");
    day_preds_.assign(in.predictions.begin(), in.predictions.end());
  }
  last_expert_ = -1;
  last_answer_ = -1;
}

Choice MwPredictor::choose() {
  if (mode_ == MwMode::sampled) {
    const std::vector<double> p = state_.distribution();
    const double u = rng_.next_double();
    double acc = 0.0;
    last_expert_ = static_cast<int>(p.size()) - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) {
        last_expert_ = static_cast<int>(i);
        break;
      }
    }
  } else {
    last_expert_ = 0;
  }
  Choice c;
  c.expert = last_expert_;
  if (input_ == InputMode::discrete) {
    last_answer_ = day_preds_[static_cast<std::size_t>(last_expert_)];
    c.answer = last_answer_;
  }
  return c;
}

double MwPredictor::observe(const DayFeedback& fb) {
  std::span<const double> costs;
  double day_cost;
  if (input_ == InputMode::discrete) {
    if (fb.outcome != 0 && fb.outcome != 1)
      throw std::invalid_argument("mw: discrete feedback needs a binary outcome");
    for (std::size_t i = 0; i < day_preds_.size(); ++i)
      scratch_costs_[i] = day_preds_[i] == fb.outcome ? 0.0 : 1.0;
    costs = scratch_costs_;
    day_cost = last_answer_ == fb.outcome ? 0.0 : 1.0;
  } else {
    costs = fb.costs;
    if (mode_ == MwMode::exact) {
      const std::vector<double> p = state_.distribution();
      day_cost = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) day_cost += p[i] * costs[i];
    } else {
      day_cost = costs[static_cast<std::size_t>(last_expert_)];
    }
  }
  state_.update(costs);
  state_.rescale_if_needed();
  day_preds_.clear();
  log_.vote(day_, day_cost);
  return day_cost;
}

std::size_t MwPredictor::words_ceiling() const { return state_.weights.size() + 4; }

FplPredictor::FplPredictor(int experts, double epsilon, InputMode input,
                           std::uint64_t seed)
    : state_(FplState::init(experts, epsilon)),
      input_(input),
      rng_(seed),
      scratch_costs_(static_cast<std::size_t>(experts)) {
  meter_.charge(experts + 2);  // running totals + epsilon + day counter
  log_.open(1);
}

void FplPredictor::begin_day(const DayInput& in) {
  ++day_;
  if (input_ == InputMode::discrete) {
    if (in.predictions.size() != state_.cum_cost.size())
      throw std::invalid_argument("fpl: prediction row length must match expert count");
    day_preds_.assign(in.predictions.begin(), in.predictions.end());
  }
  last_expert_ = -1;
  last_answer_ = -1;
}

Choice FplPredictor::choose() {
  last_expert_ = fpl_choose(state_, rng_);
  Choice c;
  c.expert = last_expert_;
  if (input_ == InputMode::discrete) {
    last_answer_ = day_preds_[static_cast<std::size_t>(last_expert_)];
    c.answer = last_answer_;
  }
  return c;
}

double FplPredictor::observe(const DayFeedback& fb) {
  std::span<const double> costs;
  double day_cost;
  if (input_ == InputMode::discrete) {
    if (fb.outcome != 0 && fb.outcome != 1)
      throw std::invalid_argument("fpl: discrete feedback needs a binary outcome");
    for (std::size_t i = 0; i < day_preds_.size(); ++i)
      scratch_costs_[i] = day_preds_[i] == fb.outcome ? 0.0 : 1.0;
    costs = scratch_costs_;
    day_cost = last_answer_ == fb.outcome ? 0.0 : 1.0;
  } else {
    costs = fb.costs;
    day_cost = costs[static_cast<std::size_t>(last_expert_)];
  }
  state_.accumulate(costs);
  day_preds_.clear();
  log_.vote(day_, day_cost);
  return day_cost;
}

std::size_t FplPredictor::words_ceiling() const { return state_.cum_cost.size() + 4; }

}  // namespace expool
