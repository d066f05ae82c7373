#include "pooled.hpp"

#include <cmath>
#include <sstream>

namespace expool {

namespace {

double log2_of(int n) { return std::log2(static_cast<double>(n)); }

int derived_pool_size(double numerator, int experts, int days, double delta,
                      const char* which) {
  if (experts < 2) throw std::invalid_argument(std::string(which) + ": need at least 2 experts");
  if (days < 1) throw std::invalid_argument(std::string(which) + ": day count must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument(std::string(which) + ": delta must be positive");
  const double raw = numerator / (static_cast<double>(days) * delta);
  const int k = static_cast<int>(std::ceil(raw));
  if (k > experts) {
    std::ostringstream os;
    os << which << ": derived pool size " << k << " exceeds expert count " << experts
       << " (delta " << delta << " is below the guarantee's lower bound)";
    throw PremiseError(os.str());
  }
  return std::max(1, k);
}

int checked_override(int k, int experts, const char* which) {
  if (k < 1 || k > experts)
    throw std::invalid_argument(std::string(which) + ": pool size override outside [1, n]");
  return k;
}

}  // namespace

Alg3Params Alg3Params::make(int experts, int days, double delta,
                            std::optional<int> k_override) {
  Alg3Params p;
  p.experts = experts;
  p.days = days;
  p.delta = delta;
  const double numerator = 16.0 * experts * log2_of(experts) * log2_of(experts);
  p.k = k_override ? checked_override(*k_override, experts, "alg3")
                   : derived_pool_size(numerator, experts, days, delta, "alg3");
  p.elim_threshold = delta / (8.0 * log2_of(experts));
  return p;
}

double round_mistake_bound(const RoundRecord& round, double delta, int experts) {
  return (round.end_day - round.start_day) * delta / 2.0 + 4.0 * log2_of(experts);
}

DiscretePoolPredictor::DiscretePoolPredictor(const Alg3Params& params, std::uint64_t seed,
                                             MemoryMeter* meter)
    : params_(params), rng_(seed), meter_(meter ? meter : &own_meter_) {
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  mistakes_.assign(pool_.size(), 0);
  // index + mistake counter per member, plus the round scalars
  charged_ = 2 * static_cast<std::size_t>(params_.k) + 6;
  meter_->charge(static_cast<std::ptrdiff_t>(charged_));
  log_.open(anchor_u_);
}

DiscretePoolPredictor::~DiscretePoolPredictor() {
  meter_->charge(-static_cast<std::ptrdiff_t>(charged_));
}

void DiscretePoolPredictor::begin_day(const DayInput& in) {
  ++day_;
  if (in.predictions.size() != static_cast<std::size_t>(params_.experts))
    throw std::invalid_argument("alg3: prediction row length must match expert count");
  day_preds_.resize(pool_.size());
  for (std::size_t j = 0; j < pool_.size(); ++j)
    day_preds_[j] = in.predictions[static_cast<std::size_t>(pool_[j])];
  vote_ = -1;
}

Choice DiscretePoolPredictor::choose() {
  int ones = 0;
  for (std::uint8_t b : day_preds_) ones += b;
  const int zeros = static_cast<int>(day_preds_.size()) - ones;
  if (ones > zeros)
    vote_ = 1;
  else if (zeros > ones)
    vote_ = 0;
  else
    vote_ = rng_.next_bit();
  Choice c;
  c.answer = vote_;
  return c;
}

double DiscretePoolPredictor::observe(const DayFeedback& fb) {
  if (fb.outcome != 0 && fb.outcome != 1)
    throw std::invalid_argument("alg3: needs a binary outcome (continuous feedback rejected)");
  const double mistake = vote_ == fb.outcome ? 0.0 : 1.0;
  log_.vote(day_, mistake);

  const int window = day_ - anchor_u_ + 1;
  std::size_t keep = 0;
  for (std::size_t j = 0; j < pool_.size(); ++j) {
    mistakes_[j] += day_preds_[j] == fb.outcome ? 0 : 1;
    if (static_cast<double>(mistakes_[j]) <= params_.elim_threshold * window) {
      pool_[keep] = pool_[j];
      mistakes_[keep] = mistakes_[j];
      ++keep;
    }
  }
  pool_.resize(keep);
  mistakes_.resize(keep);

  for (std::size_t j = 0; j < pool_.size(); ++j)
    if (static_cast<double>(mistakes_[j]) > params_.elim_threshold * window)
      throw InvariantError("alg3: retained member above the elimination threshold");

  if (pool_.empty()) resample(day_);
  day_preds_.clear();
  return mistake;
}

void DiscretePoolPredictor::resample(int anchor_day) {
  log_.close();
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  mistakes_.assign(pool_.size(), 0);
  anchor_u_ = anchor_day;
  ++round_index_;
  log_.open(anchor_u_);
}

NaiveQuarterParams NaiveQuarterParams::make(int experts, double delta,
                                            std::optional<int> k_override) {
  if (experts < 1) throw std::invalid_argument("naive-quarter: expert count must be positive");
  if (!(delta > 0.0)) throw std::invalid_argument("naive-quarter: delta must be positive");
  NaiveQuarterParams p;
  p.experts = experts;
  p.delta = delta;
  p.k = k_override ? checked_override(*k_override, experts, "naive-quarter") : experts;
  return p;
}

NaiveQuarterPredictor::NaiveQuarterPredictor(const NaiveQuarterParams& params,
                                             std::uint64_t seed)
    : params_(params), rng_(seed) {
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  mistakes_.assign(pool_.size(), 0);
  meter_.charge(2 * static_cast<std::ptrdiff_t>(params_.k) + 6);
  log_.open(anchor_u_);
}

void NaiveQuarterPredictor::begin_day(const DayInput& in) {
  ++day_;
  if (in.predictions.size() != static_cast<std::size_t>(params_.experts))
    throw std::invalid_argument("naive-quarter: prediction row length must match expert count");
  day_preds_.resize(pool_.size());
  for (std::size_t j = 0; j < pool_.size(); ++j)
    day_preds_[j] = in.predictions[static_cast<std::size_t>(pool_[j])];
  vote_ = -1;
}

Choice NaiveQuarterPredictor::choose() {
  int ones = 0;
  for (std::uint8_t b : day_preds_) ones += b;
  const int zeros = static_cast<int>(day_preds_.size()) - ones;
  // Ties resolve to answer 0, so tie days against an all-ones outcome count
  // as mistakes; that is the behaviour the build-up schedule exercises.
  vote_ = ones > zeros ? 1 : 0;
  Choice c;
  c.answer = vote_;
  return c;
}

double NaiveQuarterPredictor::observe(const DayFeedback& fb) {
  if (fb.outcome != 0 && fb.outcome != 1)
    throw std::invalid_argument("naive-quarter: needs a binary outcome");
  const double mistake = vote_ == fb.outcome ? 0.0 : 1.0;
  log_.vote(day_, mistake);

  const double threshold = params_.delta / 4.0;
  const int window = day_ - anchor_u_ + 1;
  std::size_t keep = 0;
  for (std::size_t j = 0; j < pool_.size(); ++j) {
    mistakes_[j] += day_preds_[j] == fb.outcome ? 0 : 1;
    if (static_cast<double>(mistakes_[j]) <= threshold * window) {
      pool_[keep] = pool_[j];
      mistakes_[keep] = mistakes_[j];
      ++keep;
    }
  }
  pool_.resize(keep);
  mistakes_.resize(keep);
  if (pool_.empty()) resample(day_);
  day_preds_.clear();
  return mistake;
}

void NaiveQuarterPredictor::resample(int anchor_day) {
  log_.close();
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  mistakes_.assign(pool_.size(), 0);
  anchor_u_ = anchor_day;
  log_.open(anchor_u_);
}

std::vector<int> bad_days_oracle(const Instance& instance, int expert, double threshold) {
  if (expert < 0 || expert >= instance.experts())
    throw std::out_of_range("bad_days_oracle: expert index");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("bad_days_oracle: threshold must lie in (0, 1)");
  const int days = instance.days();
  std::vector<double> prefix(static_cast<std::size_t>(days) + 1, 0.0);
  for (int t = 0; t < days; ++t)
    prefix[static_cast<std::size_t>(t) + 1] =
        prefix[static_cast<std::size_t>(t)] + instance.cost(t, expert);

  std::vector<int> bad;
  for (int t = 0; t < days; ++t) {
    for (int e = t; e < days; ++e) {
      const double window_cost =
          prefix[static_cast<std::size_t>(e) + 1] - prefix[static_cast<std::size_t>(t)];
      if (window_cost > threshold * (e - t + 1)) {
        bad.push_back(t);
        break;
      }
    }
  }
  return bad;
}

Alg4Params Alg4Params::make(int experts, int days, double delta, double beta,
                            std::optional<int> k_override,
                            std::optional<double> threshold_override) {
  if (!(beta >= 1.0)) throw std::invalid_argument("alg4: beta must be at least 1");
  Alg4Params p;
  p.experts = experts;
  p.days = days;
  p.delta = delta;
  p.beta = beta;
  const double numerator = 16.0 * beta * experts * std::log(static_cast<double>(experts)) *
                           std::log(static_cast<double>(days));
  p.k = k_override ? checked_override(*k_override, experts, "alg4")
                   : derived_pool_size(numerator, experts, days, delta, "alg4");
  p.resample_threshold = threshold_override ? *threshold_override : delta / 8.0;
  return p;
}

GeneralPoolPredictor::GeneralPoolPredictor(const Alg4Params& params, InnerKind inner,
                                           std::uint64_t seed, MemoryMeter* meter)
    : params_(params),
      inner_(make_inner(inner, params.inner_epsilon)),
      rng_(seed),
      meter_(meter ? meter : &own_meter_) {
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  cost_since_u_.assign(pool_.size(), 0.0);
  pool_costs_.resize(pool_.size());
  inner_->reset(params_.k);
  // index + cost accumulator + inner state per member, plus round scalars
  charged_ = static_cast<std::size_t>(params_.k) * (2 + inner_->member_words()) + 8;
  meter_->charge(static_cast<std::ptrdiff_t>(charged_));
  log_.open(anchor_u_);
}

GeneralPoolPredictor::~GeneralPoolPredictor() {
  meter_->charge(-static_cast<std::ptrdiff_t>(charged_));
}

void GeneralPoolPredictor::begin_day(const DayInput&) { ++day_; }

Choice GeneralPoolPredictor::choose() {
  const int pos = inner_->choose(rng_);
  Choice c;
  c.expert = pool_[static_cast<std::size_t>(pos)];
  return c;
}

double GeneralPoolPredictor::observe(const DayFeedback& fb) {
  if (fb.costs.size() != static_cast<std::size_t>(params_.experts))
    throw std::invalid_argument("alg4: cost row length must match expert count");
  for (std::size_t j = 0; j < pool_.size(); ++j)
    pool_costs_[j] = fb.costs[static_cast<std::size_t>(pool_[j])];
  const double day_cost = inner_->observe(pool_costs_);
  log_.vote(day_, day_cost);

  const int window = day_ - anchor_u_ + 1;
  bool all_above = true;
  for (std::size_t j = 0; j < pool_.size(); ++j) {
    cost_since_u_[j] += pool_costs_[j];
    if (cost_since_u_[j] <= params_.resample_threshold * window) all_above = false;
  }
  if (all_above) resample(day_);
  return day_cost;
}

void GeneralPoolPredictor::resample(int anchor_day) {
  log_.close();
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  cost_since_u_.assign(pool_.size(), 0.0);
  inner_->reset(params_.k);
  anchor_u_ = anchor_day;
  ++round_index_;
  log_.open(anchor_u_);
}

}  // namespace expool
