#include "random_order.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

namespace expool {

double alg5_threshold(double m_estimate, int days, int t, int u) {
  if (days < 1) throw std::invalid_argument("alg5_threshold: day count must be positive");
  if (t < u) throw std::invalid_argument("alg5_threshold: t must be at least u");
  const double span = static_cast<double>(t - u);
  return m_estimate / static_cast<double>(days) * span +
         4.0 * std::sqrt(span * std::log(static_cast<double>(days)));
}

Alg5Params Alg5Params::make(int experts, int days, double delta, double m_estimate,
                            double k_const, std::optional<int> k_override) {
  if (experts < 2) throw std::invalid_argument("alg5: need at least 2 experts");
  if (days < 1) throw std::invalid_argument("alg5: day count must be positive");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("alg5: delta must lie in (0, 1]");
  if (!(m_estimate >= 0.0)) throw std::invalid_argument("alg5: cost estimate must be >= 0");
  if (!(k_const > 0.0)) throw std::invalid_argument("alg5: k constant must be positive");

  Alg5Params p;
  p.experts = experts;
  p.days = days;
  p.delta = delta;
  p.m_estimate = m_estimate;
  p.k_const = k_const;
  p.inner_epsilon = delta / 2.0;
  if (k_override) {
    if (*k_override < 1 || *k_override > experts)
      throw std::invalid_argument("alg5: pool size override outside [1, n]");
    p.k = *k_override;
  } else {
    const double lg = std::log2(static_cast<double>(experts));
    const double raw = k_const * experts * lg * lg / (delta * delta * days);
    p.k = std::clamp(static_cast<int>(std::ceil(raw)), 1, experts);
  }
  return p;
}

RandomOrderPoolPredictor::RandomOrderPoolPredictor(const Alg5Params& params,
                                                   InnerKind inner, std::uint64_t seed,
                                                   MemoryMeter* meter,
                                                   std::optional<int> force_first_member)
    : params_(params),
      inner_(make_inner(inner, params.inner_epsilon)),
      rng_(seed),
      meter_(meter ? meter : &own_meter_) {
  if (force_first_member) {
    const int f = *force_first_member;
    if (f < 0 || f >= params_.experts)
      throw std::invalid_argument("alg5: forced member outside [0, n)");
    std::vector<int> rest = sample_subset(rng_, params_.experts - 1, params_.k - 1);
    pool_.reserve(static_cast<std::size_t>(params_.k));
    for (int v : rest) pool_.push_back(v >= f ? v + 1 : v);
    pool_.insert(std::lower_bound(pool_.begin(), pool_.end(), f), f);
  } else {
    pool_ = sample_subset(rng_, params_.experts, params_.k);
  }
  cost_since_u_.assign(pool_.size(), 0.0);
  pool_costs_.resize(pool_.size());
  inner_->reset(params_.k);
  charged_ = static_cast<std::size_t>(params_.k) * (2 + inner_->member_words()) + 8;
  meter_->charge(static_cast<std::ptrdiff_t>(charged_));
  log_.open(anchor_u_);
}

RandomOrderPoolPredictor::~RandomOrderPoolPredictor() {
  meter_->charge(-static_cast<std::ptrdiff_t>(charged_));
}

void RandomOrderPoolPredictor::begin_day(const DayInput&) { ++day_; }

Choice RandomOrderPoolPredictor::choose() {
  const int pos = inner_->choose(rng_);
  Choice c;
  c.expert = pool_[static_cast<std::size_t>(pos)];
  return c;
}

double RandomOrderPoolPredictor::observe(const DayFeedback& fb) {
  if (fb.costs.size() != static_cast<std::size_t>(params_.experts))
    throw std::invalid_argument("alg5: cost row length must match expert count");
  for (std::size_t j = 0; j < pool_.size(); ++j)
    pool_costs_[j] = fb.costs[static_cast<std::size_t>(pool_[j])];
  const double day_cost = inner_->observe(pool_costs_);
  log_.vote(day_, day_cost);
  ++observed_since_u_;

  const double cutoff = alg5_threshold(params_.m_estimate, params_.days, day_, anchor_u_);
  bool all_above = true;
  for (std::size_t j = 0; j < pool_.size(); ++j) {
    cost_since_u_[j] += pool_costs_[j];
    if (cost_since_u_[j] <= cutoff) all_above = false;
  }
  if (all_above) resample(day_);
  return day_cost;
}

double RandomOrderPoolPredictor::min_tenure_avg() const {
  double best = has_closed_tenure_ ? min_closed_tenure_avg_
                                   : std::numeric_limits<double>::infinity();
  if (observed_since_u_ > 0) {
    for (double c : cost_since_u_)
      best = std::min(best, c / static_cast<double>(observed_since_u_));
  }
  return best;
}

void RandomOrderPoolPredictor::resample(int anchor_day) {
  if (observed_since_u_ > 0) {
    for (double c : cost_since_u_) {
      const double avg = c / static_cast<double>(observed_since_u_);
      if (!has_closed_tenure_ || avg < min_closed_tenure_avg_) min_closed_tenure_avg_ = avg;
    }
    has_closed_tenure_ = true;
  }
  log_.close();
  pool_ = sample_subset(rng_, params_.experts, params_.k);
  cost_since_u_.assign(pool_.size(), 0.0);
  inner_->reset(params_.k);
  anchor_u_ = anchor_day;
  observed_since_u_ = 0;
  ++resamples_;
  log_.open(anchor_u_);
}

double estimator_gamma_step(double gamma, int epoch_index, double epoch_best_avg,
                            double delta) {
  if (epoch_index < 1) throw std::invalid_argument("estimator: epoch index must be >= 1");
  const double step = std::ldexp(1.0, -(epoch_index + 1));
  if (gamma > (1.0 + delta) * epoch_best_avg)
    gamma -= step;
  else if (gamma < (1.0 - delta) * epoch_best_avg)
    gamma += step;
  return std::clamp(gamma, 0.0, 1.0);
}

EstimatorParams EstimatorParams::make(int experts, int days, double delta, double k_const) {
  if (experts < 2) throw std::invalid_argument("estimator: need at least 2 experts");
  if (days < 1) throw std::invalid_argument("estimator: day count must be positive");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("estimator: delta must lie in (0, 1)");

  EstimatorParams p;
  p.experts = experts;
  p.days = days;
  p.delta = delta;
  p.k_const = k_const;
  const double lg = 2.0 * std::log2(1.0 / delta);
  p.ell = static_cast<int>(std::ceil(lg));
  p.epoch_len = static_cast<int>(std::floor(delta * days / lg));
  if (p.epoch_len < 1)
    throw std::invalid_argument("estimator: delta too small for this day count (empty epochs)");
  if (static_cast<long long>(p.ell) * p.epoch_len >= days) {
    std::ostringstream os;
    os << "estimator: " << p.ell << " epochs of " << p.epoch_len
       << " days leave no room for the main run (T = " << days << ")";
    throw std::invalid_argument(os.str());
  }
  return p;
}

EstimatedMPredictor::EstimatedMPredictor(const EstimatorParams& params, InnerKind inner,
                                         std::uint64_t seed)
    : params_(params), inner_kind_(inner), rng_(seed) {
  meter_.charge(6);  // gamma, epoch index, day counters, epoch geometry
  start_phase();
}

void EstimatedMPredictor::start_phase() {
  Alg5Params phase_params;
  if (epoch_index_ <= params_.ell) {
    phase_params = Alg5Params::make(params_.experts, params_.epoch_len, 0.01,
                                    gamma_ * params_.epoch_len, params_.k_const);
  } else {
    const int remaining = params_.days - params_.ell * params_.epoch_len;
    phase_params = Alg5Params::make(params_.experts, remaining, params_.delta,
                                    gamma_ * remaining, params_.k_const);
  }
  max_k_ = std::max(max_k_, phase_params.k);
  phase_start_day_ = day_ + 1;
  days_in_phase_ = 0;
  phase_ = std::make_unique<RandomOrderPoolPredictor>(
      phase_params, inner_kind_, rng_.next_u64(), &meter_);
}

void EstimatedMPredictor::close_phase() {
  phase_->finish();
  const int offset = phase_start_day_ - 1;
  for (const RoundRecord& r : phase_->round_ledger())
    ledger_.push_back({r.start_day + offset, r.end_day + offset, r.cost});
  phase_.reset();
}

void EstimatedMPredictor::begin_day(const DayInput& in) {
  ++day_;
  if (day_ > params_.days)
    throw std::logic_error("estimator: driven past the configured day count");
  phase_->begin_day(in);
}

Choice EstimatedMPredictor::choose() { return phase_->choose(); }

double EstimatedMPredictor::observe(const DayFeedback& fb) {
  const double day_cost = phase_->observe(fb);
  ++days_in_phase_;
  if (epoch_index_ <= params_.ell && days_in_phase_ == params_.epoch_len) {
    const double epoch_best = phase_->min_tenure_avg();
    epoch_best_avgs_.push_back(epoch_best);
    close_phase();
    gamma_ = estimator_gamma_step(gamma_, epoch_index_, epoch_best, params_.delta);
    ++epoch_index_;
    start_phase();
  }
  return day_cost;
}

void EstimatedMPredictor::finish() {
  if (phase_) close_phase();
}

PermutationCheck permutation_check(const Instance& base, const Instance& shuffled) {
  PermutationCheck out;
  if (base.experts() != shuffled.experts() || base.days() != shuffled.days() ||
      base.cost_model().kind != shuffled.cost_model().kind ||
      base.cost_model().width != shuffled.cost_model().width) {
    out.ok = false;
    out.detail = "instance shapes differ";
    return out;
  }

  const int n = base.experts();
  auto day_key = [n](const Instance& inst, int t) {
    std::string key;
    if (inst.cost_model().kind == CostKind::discrete) {
      key.reserve(static_cast<std::size_t>(n) + 1);
      key.push_back(static_cast<char>('0' + inst.outcome(t)));
      for (std::uint8_t b : inst.predictions(t)) key.push_back(static_cast<char>('0' + b));
    } else {
      key.resize(static_cast<std::size_t>(n) * sizeof(double));
      for (int i = 0; i < n; ++i) {
        const double c = inst.cost(t, i);
        std::memcpy(key.data() + static_cast<std::size_t>(i) * sizeof(double), &c,
                    sizeof(double));
      }
    }
    return key;
  };

  std::vector<std::string> base_keys;
  std::vector<std::string> shuf_keys;
  base_keys.reserve(static_cast<std::size_t>(base.days()));
  shuf_keys.reserve(static_cast<std::size_t>(base.days()));
  for (int t = 0; t < base.days(); ++t) {
    base_keys.push_back(day_key(base, t));
    shuf_keys.push_back(day_key(shuffled, t));
  }
  std::sort(base_keys.begin(), base_keys.end());
  std::sort(shuf_keys.begin(), shuf_keys.end());
  if (base_keys != shuf_keys) {
    out.ok = false;
    out.detail = "day multisets differ (a day's expert columns were altered)";
  }
  return out;
}

}  // namespace expool
