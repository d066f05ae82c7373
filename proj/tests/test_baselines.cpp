#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "baselines.hpp"
#include "rng.hpp"
#include "types.hpp"

using namespace expool;

namespace {

Instance random_cost_instance(Rng& rng, int n, int days) {
  std::vector<double> costs(static_cast<std::size_t>(n) * days);
  for (double& c : costs) c = rng.next_double();
  return Instance::continuous(n, 1.0, std::move(costs));
}

}  // namespace

TEST_CASE("mw distribution normalizes the weights") {
  SUBCASE("uniform init") {
    auto s = MwState::init(4, 0.5);
    for (double p : s.distribution()) CHECK(p == doctest::Approx(0.25));
  }
  SUBCASE("hand-evaluated ratio") {
    MwState s{{0.5, 1.0}, 0.5};
    const auto p = s.distribution();
    CHECK(p[0] == doctest::Approx(1.0 / 3.0));
    CHECK(p[1] == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("single expert") {
    auto s = MwState::init(1, 0.25);
    CHECK(s.distribution()[0] == doctest::Approx(1.0));
  }
  SUBCASE("sums to one") {
    Rng rng(11);
    MwState s{{}, 0.5};
    for (int i = 0; i < 17; ++i) s.weights.push_back(0.001 + rng.next_double());
    double total = 0.0;
    for (double p : s.distribution()) total += p;
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  SUBCASE("empty expert set rejected") {
    MwState s{{}, 0.5};
    CHECK_THROWS_AS(s.distribution(), std::invalid_argument);
  }
}

TEST_CASE("mw update multiplies by 1 - eps*cost") {
  SUBCASE("one step by hand") {
    MwState s{{1.0, 1.0}, 0.5};
    const double costs[] = {1.0, 0.0};
    s.update(costs);
    CHECK(s.weights[0] == doctest::Approx(0.5));
    CHECK(s.weights[1] == doctest::Approx(1.0));
  }
  SUBCASE("zero costs leave weights unchanged") {
    MwState s{{0.7, 0.3, 0.1}, 0.25};
    const double costs[] = {0.0, 0.0, 0.0};
    s.update(costs);
    CHECK(s.weights[0] == doctest::Approx(0.7));
    CHECK(s.weights[1] == doctest::Approx(0.3));
    CHECK(s.weights[2] == doctest::Approx(0.1));
  }
  SUBCASE("single expert") {
    MwState s{{1.0}, 0.5};
    const double costs[] = {1.0};
    s.update(costs);
    CHECK(s.weights[0] == doctest::Approx(0.5));
  }
  SUBCASE("cost outside [0,1] rejected") {
    MwState s{{1.0}, 0.5};
    const double costs[] = {1.5};
    CHECK_THROWS_AS(s.update(costs), std::invalid_argument);
  }
  SUBCASE("epsilon outside (0, 1/2] rejected") {
    CHECK_THROWS_AS(MwState::init(2, 0.75), std::invalid_argument);
    CHECK_THROWS_AS(MwState::init(2, 0.0), std::invalid_argument);
  }
}

TEST_CASE("mw weights stay positive and never increase") {
  Rng rng(5);
  MwState s = MwState::init(8, 0.5);
  std::vector<double> costs(8);
  for (int t = 0; t < 200; ++t) {
    const std::vector<double> before = s.weights;
    for (double& c : costs) c = rng.next_double();
    s.update(costs);
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
      CHECK(s.weights[i] > 0.0);
      CHECK(s.weights[i] <= before[i]);
    }
  }
}

TEST_CASE("mw_expected_cost hand evaluations") {
  SUBCASE("all-zero costs") {
    auto inst = Instance::continuous(3, 1.0, std::vector<double>(9, 0.0));
    CHECK(mw_expected_cost(inst, 0.5) == doctest::Approx(0.0));
  }
  SUBCASE("single day, uniform distribution") {
    auto inst = Instance::continuous(2, 1.0, {1.0, 0.0});
    CHECK(mw_expected_cost(inst, 0.5) == doctest::Approx(0.5));
  }
  SUBCASE("two days, weights shift after the first") {
    auto inst = Instance::continuous(2, 1.0, {1.0, 0.0, 1.0, 0.0});
    CHECK(mw_expected_cost(inst, 0.5) == doctest::Approx(0.5 + 1.0 / 3.0));
  }
}

TEST_CASE("mw expected cost satisfies the exact guarantee on random instances") {
  Rng rng(42);
  const double epsilons[] = {0.1, 0.25, 0.5};
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(63));
    const int days = 1 + static_cast<int>(rng.below(500));
    auto inst = random_cost_instance(rng, n, days);
    const double eps = epsilons[rep % 3];
    const double expected = mw_expected_cost(inst, eps);
    const double best = best_expert_cost(inst).total_cost;
    CHECK(expected <= (1.0 + eps) * best + std::log(static_cast<double>(n)) / eps);
  }
}

TEST_CASE("mw survives long runs without weight underflow") {
  // 2000 days at eps = 1/2 drives raw weights below double range; the
  // rescaled run must still produce a valid distribution and the bound.
  Rng rng(7);
  auto inst = random_cost_instance(rng, 8, 2000);
  const double expected = mw_expected_cost(inst, 0.5);
  const double best = best_expert_cost(inst).total_cost;
  CHECK(std::isfinite(expected));
  CHECK(expected <= 1.5 * best + std::log(8.0) / 0.5);
}

TEST_CASE("fpl_choose") {
  SUBCASE("single expert is always chosen") {
    auto s = FplState::init(1, 1.0);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) CHECK(fpl_choose(s, rng) == 0);
  }
  SUBCASE("a 1000-cost gap is almost never overcome") {
    FplState s{{0.0, 1000.0}, 1.0};
    Rng rng(17);
    int first = 0;
    for (int i = 0; i < 10000; ++i)
      if (fpl_choose(s, rng) == 0) ++first;
    CHECK(first >= 9900);
  }
  SUBCASE("equal totals split evenly") {
    FplState s{{5.0, 5.0}, 1.0};
    Rng rng(23);
    int first = 0;
    for (int i = 0; i < 10000; ++i)
      if (fpl_choose(s, rng) == 0) ++first;
    CHECK(first > (0.5 - 0.02) * 10000);
    CHECK(first < (0.5 + 0.02) * 10000);
  }
}

TEST_CASE("fpl perturbations have mean |p| = 2/eps and fair signs") {
  const double eps = 0.5;
  Rng rng(31);
  // one-expert choose consumes exactly one (r, sign) pair per call; measure
  // the distribution directly instead
  double abs_sum = 0.0;
  int positive = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double r = rng.exponential();
    const double magnitude = 2.0 * r / eps;
    const bool plus = rng.next_bit() != 0;
    abs_sum += magnitude;
    if (plus) ++positive;
  }
  const double mean_abs = abs_sum / draws;
  CHECK(mean_abs > 0.95 * (2.0 / eps));
  CHECK(mean_abs < 1.05 * (2.0 / eps));
  const double sign_freq = static_cast<double>(positive) / draws;
  CHECK(sign_freq > 0.49);
  CHECK(sign_freq < 0.51);
}

TEST_CASE("fpl cumulative totals track observed costs") {
  auto s = FplState::init(2, 1.0);
  const double day1[] = {0.5, 0.25};
  const double day2[] = {0.25, 0.5};
  s.accumulate(day1);
  s.accumulate(day2);
  CHECK(s.cum_cost[0] == doctest::Approx(0.75));
  CHECK(s.cum_cost[1] == doctest::Approx(0.75));
  const double bad[] = {2.0, 0.0};
  CHECK_THROWS_AS(s.accumulate(bad), std::invalid_argument);
}

TEST_CASE("majority_vote") {
  Rng rng(13);
  SUBCASE("clear majority") {
    const std::uint8_t preds[] = {1, 1, 0};
    const int pool[] = {0, 1, 2};
    CHECK(majority_vote(preds, pool, rng) == 1);
  }
  SUBCASE("singleton pool") {
    const std::uint8_t preds[] = {0};
    const int pool[] = {0};
    CHECK(majority_vote(preds, pool, rng) == 0);
  }
  SUBCASE("empty pool rejected") {
    const std::uint8_t preds[] = {0};
    CHECK_THROWS_AS(majority_vote(preds, {}, rng), std::invalid_argument);
  }
  SUBCASE("exact ties split by a fair coin") {
    const std::uint8_t preds[] = {0, 1};
    const int pool[] = {0, 1};
    int ones = 0;
    for (int i = 0; i < 10000; ++i) ones += majority_vote(preds, pool, rng);
    CHECK(ones > (0.5 - 0.02) * 10000);
    CHECK(ones < (0.5 + 0.02) * 10000);
  }
}

TEST_CASE("guarantee constants of the inner predictors") {
  CHECK(inner_beta(InnerKind::mw_exact) == doctest::Approx(1.0));
  CHECK(inner_beta(InnerKind::mw_sampled) == doctest::Approx(1.0));
  CHECK(inner_beta(InnerKind::fpl) == doctest::Approx(16.0));
}

TEST_CASE("mw predictor in exact mode matches mw_expected_cost") {
  Rng rng(57);
  auto inst = random_cost_instance(rng, 6, 120);
  MwPredictor alg(6, 0.25, MwMode::exact, InputMode::continuous, 999);
  std::vector<double> row(6);
  double total = 0.0;
  for (int t = 0; t < inst.days(); ++t) {
    alg.begin_day({});
    (void)alg.choose();
    inst.fill_costs(t, row);
    DayFeedback fb;
    fb.costs = row;
    total += alg.observe(fb);
  }
  alg.finish();
  CHECK(total == doctest::Approx(mw_expected_cost(inst, 0.25)).epsilon(1e-12));
  CHECK(alg.round_ledger().size() == 1);
  CHECK(alg.peak_words() <= alg.words_ceiling());
}

TEST_CASE("discrete-mode baselines emit answers and charge mistakes") {
  // two experts, expert 0 always right; sampled MW should converge to it
  const int days = 400;
  std::vector<std::uint8_t> preds;
  std::vector<std::uint8_t> outcomes;
  Rng rng(71);
  for (int t = 0; t < days; ++t) {
    const std::uint8_t y = static_cast<std::uint8_t>(rng.next_bit());
    outcomes.push_back(y);
    preds.push_back(y);
    preds.push_back(static_cast<std::uint8_t>(1 - y));
  }
  auto inst = Instance::discrete(2, preds, outcomes);

  MwPredictor alg(2, 0.5, MwMode::sampled, InputMode::discrete, 5);
  double mistakes = 0.0;
  for (int t = 0; t < days; ++t) {
    DayInput in;
    in.predictions = inst.predictions(t);
    alg.begin_day(in);
    const Choice c = alg.choose();
    CHECK((c.answer == 0 || c.answer == 1));
    DayFeedback fb;
    fb.outcome = inst.outcome(t);
    mistakes += alg.observe(fb);
  }
  alg.finish();
  CHECK(mistakes < 40.0);  // the wrong expert's weight collapses quickly
  CHECK_THROWS_AS(MwPredictor(2, 0.5, MwMode::exact, InputMode::discrete, 1),
                  std::invalid_argument);
}
