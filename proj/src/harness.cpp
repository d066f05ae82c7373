#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "pooled.hpp"
#include "random_order.hpp"

namespace expool {

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct BuiltPredictor {
  std::unique_ptr<Predictor> predictor;
  int pool_capacity = 0;
  bool in_premise = true;
};

bool alg3_premise(int n, int days, double delta, double best_cost) {
  const double lg = std::log2(static_cast<double>(n));
  return delta > 16.0 * lg * lg / days &&
         best_cost <= delta * delta * days / (128.0 * lg * lg);
}

bool alg4_premise(int n, int days, double delta, double beta, double best_cost) {
  const double ln_n = std::log(static_cast<double>(n));
  return delta > 16.0 * beta * ln_n * ln_n / days &&
         best_cost <= delta * delta * days / (128.0 * beta * ln_n);
}

bool alg5_premise(int n, int days, double delta) {
  const double lg = std::log2(static_cast<double>(n));
  return delta > std::sqrt(16.0 * lg * lg / days);
}

BuiltPredictor build_predictor(const ExperimentConfig& cfg, const Instance& inst,
                               double best_cost, std::uint64_t alg_seed) {
  const int n = inst.experts();
  const int days = inst.days();
  BuiltPredictor out;
  switch (cfg.algorithm) {
    case Algorithm::mw:
      out.predictor = std::make_unique<MwPredictor>(n, cfg.epsilon, cfg.mw_mode,
                                                    InputMode::continuous, alg_seed);
      break;
    case Algorithm::fpl:
      out.predictor =
          std::make_unique<FplPredictor>(n, cfg.epsilon, InputMode::continuous, alg_seed);
      break;
    case Algorithm::alg3: {
      const Alg3Params p = Alg3Params::make(n, days, cfg.delta, cfg.k_override);
      out.predictor = std::make_unique<DiscretePoolPredictor>(p, alg_seed);
      out.pool_capacity = p.k;
      out.in_premise = alg3_premise(n, days, cfg.delta, best_cost);
      break;
    }
    case Algorithm::alg4: {
      const Alg4Params p = Alg4Params::make(n, days, cfg.delta, inner_beta(cfg.inner),
                                            cfg.k_override, cfg.resample_threshold);
      out.predictor = std::make_unique<GeneralPoolPredictor>(p, cfg.inner, alg_seed);
      out.pool_capacity = p.k;
      out.in_premise = alg4_premise(n, days, cfg.delta, p.beta, best_cost);
      break;
    }
    case Algorithm::alg5: {
      const double m_est = cfg.m_estimate ? *cfg.m_estimate : best_cost;
      const Alg5Params p =
          Alg5Params::make(n, days, cfg.delta, m_est, cfg.alg5_k_const, cfg.k_override);
      out.predictor = std::make_unique<RandomOrderPoolPredictor>(p, cfg.inner, alg_seed);
      out.pool_capacity = p.k;
      out.in_premise = alg5_premise(n, days, cfg.delta);
      break;
    }
    case Algorithm::alg5_estimated: {
      const EstimatorParams p = EstimatorParams::make(n, days, cfg.delta, cfg.alg5_k_const);
      auto predictor = std::make_unique<EstimatedMPredictor>(p, cfg.inner, alg_seed);
      out.pool_capacity = 0;  // filled after the run (phases differ)
      out.in_premise = alg5_premise(n, days, cfg.delta);
      out.predictor = std::move(predictor);
      break;
    }
    case Algorithm::naive_quarter: {
      const NaiveQuarterParams p = NaiveQuarterParams::make(n, cfg.delta, cfg.k_override);
      out.predictor = std::make_unique<NaiveQuarterPredictor>(p, alg_seed);
      out.pool_capacity = p.k;
      break;
    }
  }
  return out;
}

}  // namespace

TrialReport run_trial(const ExperimentConfig& cfg, int trial_index) {
  const std::uint64_t tseed = trial_seed(cfg.seed, trial_index);
  const std::uint64_t gen_seed = derive_seed(tseed, kGenStreamTag);
  const std::uint64_t alg_seed = derive_seed(tseed, kAlgStreamTag);

  const Instance inst = materialize_stream(cfg.stream, gen_seed);
  const int n = inst.experts();
  const int days = inst.days();
  const BestExpert best = best_expert_cost(inst);

  BuiltPredictor built = build_predictor(cfg, inst, best.total_cost, alg_seed);
  Predictor& alg = *built.predictor;

  if (alg.input_mode() == InputMode::discrete &&
      inst.cost_model().kind != CostKind::discrete)
    throw std::invalid_argument(std::string(algorithm_name(cfg.algorithm)) +
                                " requires a discrete-mode instance");

  std::vector<double> cost_row(static_cast<std::size_t>(n));
  double alg_cost = 0.0;
  std::size_t max_words_seen = 0;

  for (int t = 0; t < days; ++t) {
    DayInput in;
    if (alg.input_mode() == InputMode::discrete) in.predictions = inst.predictions(t);
    alg.begin_day(in);

    const Choice choice = alg.choose();
    if (alg.input_mode() == InputMode::discrete) {
      if (choice.answer != 0 && choice.answer != 1)
        throw InvariantError("trial: predictor produced a non-binary answer");
    } else if (choice.expert < 0 || choice.expert >= n) {
      throw InvariantError("trial: predictor chose an expert outside [0, n)");
    }

    DayFeedback fb;
    if (alg.input_mode() == InputMode::discrete) {
      fb.outcome = inst.outcome(t);
    } else {
      inst.fill_costs(t, cost_row);
      fb.costs = cost_row;
    }
    alg_cost += alg.observe(fb);
    max_words_seen = std::max(max_words_seen, alg.words());
  }
  alg.finish();

  if (alg_cost > days + 1e-9)
    throw InvariantError("trial: total cost exceeds the day count");
  if (alg.peak_words() != max_words_seen)
    throw InvariantError("trial: meter peak disagrees with the per-day maximum");

  std::size_t ceiling = alg.words_ceiling();
  if (cfg.algorithm == Algorithm::alg5_estimated) {
    auto& est = dynamic_cast<EstimatedMPredictor&>(alg);
    built.pool_capacity = est.max_pool_capacity();
    ceiling = est.words_ceiling();
  }
  if (alg.peak_words() > ceiling)
    throw InvariantError("trial: peak words above the published ceiling");

  if (cfg.algorithm == Algorithm::alg3) {
    for (const RoundRecord& r : alg.round_ledger())
      if (r.cost > round_mistake_bound(r, cfg.delta, n) + 1e-9)
        throw InvariantError("trial: a round exceeded its mistake bound");
  }

  TrialReport rep;
  rep.alg_cost = alg_cost;
  rep.best_cost = best.total_cost;
  rep.regret = regret_of(alg_cost, best.total_cost, days);
  rep.round_ledger = alg.round_ledger();
  rep.rounds = static_cast<int>(rep.round_ledger.size());
  rep.peak_words = alg.peak_words();
  rep.best_index = best.index;
  rep.experts = n;
  rep.days = days;
  rep.width = inst.cost_model().width;
  rep.pool_capacity = built.pool_capacity;
  rep.seed = tseed;
  rep.trial_index = trial_index;
  rep.in_premise = built.in_premise;
  return rep;
}

namespace {

AggregateReport aggregate_rows(const std::vector<TrialRow>& rows, double delta) {
  AggregateReport agg;
  agg.trials = static_cast<int>(rows.size());
  std::vector<double> regrets;
  double round_sum = 0.0;
  for (const TrialRow& row : rows) {
    if (!row.ok) {
      ++agg.failures;
      continue;
    }
    regrets.push_back(row.report.regret);
    round_sum += row.report.rounds;
    agg.max_peak_words = std::max(agg.max_peak_words, row.report.peak_words);
    if (row.report.in_premise) ++agg.in_premise;
    if (row.report.regret <= delta) agg.frac_within_delta += 1.0;
  }
  agg.failed = agg.failures > 0;
  if (regrets.empty()) return agg;

  const std::size_t m = regrets.size();
  std::sort(regrets.begin(), regrets.end());
  double sum = 0.0;
  for (double r : regrets) sum += r;
  agg.mean_regret = sum / static_cast<double>(m);
  auto quantile = [&regrets, m](double q) {
    const auto idx = static_cast<std::size_t>(std::llround(q * static_cast<double>(m - 1)));
    return regrets[std::min(idx, m - 1)];
  };
  agg.median_regret = quantile(0.5);
  agg.p10_regret = quantile(0.1);
  agg.p90_regret = quantile(0.9);
  agg.frac_within_delta /= static_cast<double>(m);
  agg.mean_rounds = round_sum / static_cast<double>(m);
  return agg;
}

std::string sanitize_csv(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.config = cfg;
  result.rows.resize(static_cast<std::size_t>(cfg.trials));

  int threads = cfg.threads > 0 ? cfg.threads
                                : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, cfg.trials);

  std::atomic<int> next{0};
  auto worker = [&cfg, &result, &next] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= cfg.trials) break;
      TrialRow& row = result.rows[static_cast<std::size_t>(i)];
      try {
        row.report = run_trial(cfg, i);
        row.ok = true;
      } catch (const std::exception& e) {
        row.ok = false;
        if (dynamic_cast<const PremiseError*>(&e))
          row.kind = FailKind::premise;
        else if (dynamic_cast<const InvariantError*>(&e))
          row.kind = FailKind::invariant;
        else
          row.kind = FailKind::other;
        row.error = e.what();
        row.report.trial_index = i;
        row.report.seed = trial_seed(cfg.seed, i);
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  result.aggregate = aggregate_rows(result.rows, cfg.delta);
  if (!cfg.out.empty()) result.write_csv(cfg.out);
  return result;
}

std::string ExperimentResult::csv() const {
  std::ostringstream os;
  os << "trial,seed,algorithm,n,T,delta,k,alg_cost,best_cost,regret,rounds,peak_words,"
        "premise,status,error\n";
  for (const TrialRow& row : rows) {
    const TrialReport& r = row.report;
    const double w = r.width;
    os << r.trial_index << ',' << r.seed << ',' << algorithm_name(config.algorithm) << ','
       << r.experts << ',' << r.days << ',' << fmt9(config.delta) << ',' << r.pool_capacity
       << ',' << fmt9(r.alg_cost * w) << ',' << fmt9(r.best_cost * w) << ','
       << fmt9(r.regret * w) << ',' << r.rounds << ',' << r.peak_words << ','
       << (r.in_premise ? "in" : "out") << ',' << (row.ok ? "ok" : "failed") << ','
       << sanitize_csv(row.error) << '\n';
  }
  return os.str();
}

void ExperimentResult::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("results: cannot open for writing: " + path);
  os << csv();
  if (!os) throw std::runtime_error("results: write failed: " + path);
}

std::string ExperimentResult::summary() const {
  const AggregateReport& a = aggregate;
  std::ostringstream os;
  os << "algorithm=" << algorithm_name(config.algorithm) << " trials=" << a.trials
     << " failures=" << a.failures << " in_premise=" << a.in_premise
     << "\nregret mean=" << fmt9(a.mean_regret) << " median=" << fmt9(a.median_regret)
     << " p10=" << fmt9(a.p10_regret) << " p90=" << fmt9(a.p90_regret)
     << "\nfrac(regret<=delta)=" << fmt9(a.frac_within_delta)
     << " mean_rounds=" << fmt9(a.mean_rounds) << " max_peak_words=" << a.max_peak_words
     << (a.failed ? "\nstatus=FAILED" : "\nstatus=ok");
  return os.str();
}

FrontierResult memory_frontier(const ExperimentConfig& base,
                               const std::vector<double>& deltas) {
  if (deltas.empty()) throw std::invalid_argument("frontier: need at least one delta");
  FrontierResult out;
  for (double d : deltas) {
    ExperimentConfig cfg = base;
    cfg.delta = d;
    cfg.out.clear();
    const ExperimentResult res = run_experiment(cfg);
    if (res.aggregate.failed) {
      for (const TrialRow& row : res.rows)
        if (!row.ok)
          throw std::runtime_error("frontier: delta " + fmt9(d) + " failed: " + row.error);
    }
    FrontierRow fr;
    fr.delta = d;
    fr.k = res.rows.empty() ? 0 : res.rows.front().report.pool_capacity;
    fr.max_peak_words = res.aggregate.max_peak_words;
    fr.mean_regret = res.aggregate.mean_regret;
    out.rows.push_back(fr);
  }
  return out;
}

std::string FrontierResult::csv() const {
  std::ostringstream os;
  os << "delta,k,peak_words,mean_regret\n";
  for (const FrontierRow& r : rows)
    os << fmt9(r.delta) << ',' << r.k << ',' << r.max_peak_words << ','
       << fmt9(r.mean_regret) << '\n';
  return os.str();
}

void FrontierResult::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("frontier: cannot open for writing: " + path);
  os << csv();
  if (!os) throw std::runtime_error("frontier: write failed: " + path);
}

ReduceResult run_reduce_experiment(bool yes_case, double delta,
                                   std::optional<double> offset_override, int experts,
                                   int days, int trials, std::uint64_t base_seed,
                                   std::optional<double> oracle_epsilon) {
  if (trials < 1) throw std::invalid_argument("reduce: trials must be at least 1");
  ReduceResult out;
  out.params = ReductionParams::make(delta);
  const double offset = offset_override ? *offset_override : out.params.offset;
  if (!(offset >= 0.0 && offset <= 0.5))
    throw std::invalid_argument("reduce: planted bias must lie in [0, 1/2]");

  double epsilon = oracle_epsilon
                       ? *oracle_epsilon
                       : std::sqrt(std::log(static_cast<double>(experts)) / days);
  epsilon = std::clamp(epsilon, 1e-6, 0.5);

  double accuracy_sum = 0.0;
  for (int i = 0; i < trials; ++i) {
    const std::uint64_t tseed = trial_seed(base_seed, i);
    const std::uint64_t gen_seed = derive_seed(tseed, kGenStreamTag);
    const std::uint64_t alg_seed = derive_seed(tseed, kAlgStreamTag);
    Rng mask_rng(derive_seed(tseed, kMaskStreamTag));

    DiffDistSpec spec;
    spec.experts = experts;
    spec.days = days;
    spec.epsilon = offset;
    spec.yes_case = yes_case;
    if (yes_case) {
      Rng plant(derive_seed(gen_seed, kPlantStreamTag));
      spec.planted_index = static_cast<int>(plant.below(static_cast<std::uint64_t>(experts)));
    }
    const BitMatrix bits = gen_diffdist(spec, gen_seed);

    MwPredictor oracle(experts, epsilon, MwMode::sampled, InputMode::discrete, alg_seed);
    const ReductionVerdict verdict = run_reduction(oracle, bits, out.params, mask_rng);

    ReduceRow row;
    row.yes_case = yes_case;
    row.seed = tseed;
    row.accuracy = verdict.accuracy;
    row.decision = verdict.decision;
    row.correct = verdict.decision == (yes_case ? 1 : 0);
    accuracy_sum += verdict.accuracy;
    if (row.correct) ++out.correct_count;
    out.rows.push_back(row);
  }
  out.mean_accuracy = accuracy_sum / static_cast<double>(trials);
  return out;
}

std::string ReduceResult::csv() const {
  std::ostringstream os;
  os << "case,seed,accuracy,decision,correct\n";
  for (const ReduceRow& r : rows)
    os << (r.yes_case ? "yes" : "no") << ',' << r.seed << ',' << fmt9(r.accuracy) << ','
       << r.decision << ',' << (r.correct ? 1 : 0) << '\n';
  return os.str();
}

void ReduceResult::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("reduce: cannot open for writing: " + path);
  os << csv();
  if (!os) throw std::runtime_error("reduce: write failed: " + path);
}

}  // namespace expool
