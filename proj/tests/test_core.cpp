#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "generators.hpp"
#include "rng.hpp"
#include "types.hpp"

using namespace expool;

namespace {

Instance make_continuous(int n, std::vector<double> costs, double width = 1.0) {
  return Instance::continuous(n, width, std::move(costs));
}

}  // namespace

TEST_CASE("best_expert_cost picks the minimum column, smallest index on ties") {
  SUBCASE("all-zero costs") {
    auto inst = make_continuous(3, {0, 0, 0, 0, 0, 0});
    const auto best = best_expert_cost(inst);
    CHECK(best.index == 0);
    CHECK(best.total_cost == doctest::Approx(0.0));
  }
  SUBCASE("hand-summed columns") {
    // days: (1,0), (0,0), (1,1) -> totals (2, 1)
    auto inst = make_continuous(2, {1, 0, 0, 0, 1, 1});
    const auto best = best_expert_cost(inst);
    CHECK(best.index == 1);
    CHECK(best.total_cost == doctest::Approx(1.0));
  }
  SUBCASE("single expert") {
    auto inst = make_continuous(1, {0.25, 0.5, 0.125});
    const auto best = best_expert_cost(inst);
    CHECK(best.index == 0);
    CHECK(best.total_cost == doctest::Approx(0.875));
  }
}

TEST_CASE("regret_of arithmetic and rejection") {
  CHECK(regret_of(50, 50, 100) == doctest::Approx(0.0));
  CHECK(regret_of(75, 25, 100) == doctest::Approx(0.5));
  CHECK(regret_of(10, 25, 100) == doctest::Approx(-0.15));
  CHECK_THROWS_AS(regret_of(1, 1, 0), std::invalid_argument);
}

TEST_CASE("memory meter charges and peaks") {
  MemoryMeter m;
  m.charge(5);
  CHECK(m.current() == 5);
  CHECK(m.peak() == 5);
  m.charge(-3);
  CHECK(m.current() == 2);
  CHECK(m.peak() == 5);
  m.charge(10);
  CHECK(m.current() == 12);
  CHECK(m.peak() == 12);
  CHECK_THROWS_AS(m.charge(-13), std::logic_error);
}

TEST_CASE("discrete cost derivation: cost is 1 exactly when prediction differs") {
  // exhaustive over prediction/outcome combinations on one day
  for (int y = 0; y <= 1; ++y) {
    std::vector<std::uint8_t> preds = {0, 1};
    auto inst = Instance::discrete(2, preds, {static_cast<std::uint8_t>(y)});
    for (int i = 0; i < 2; ++i) {
      const double expected = preds[static_cast<std::size_t>(i)] == y ? 0.0 : 1.0;
      CHECK(inst.cost(0, i) == doctest::Approx(expected));
    }
  }
}

TEST_CASE("continuous costs normalize by the width and reports re-scale") {
  auto inst = make_continuous(2, {1.0, 4.0, 3.0, 2.0}, 4.0);
  CHECK(inst.cost(0, 0) == doctest::Approx(0.25));
  CHECK(inst.cost(0, 1) == doctest::Approx(1.0));
  CHECK(inst.cost_model().width == doctest::Approx(4.0));
  CHECK_THROWS_AS(make_continuous(1, {5.0}, 4.0), std::invalid_argument);
}

TEST_CASE("best cost is invariant under permuting expert columns") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(rng.below(6));
    const int days = 1 + static_cast<int>(rng.below(12));
    std::vector<double> costs(static_cast<std::size_t>(n) * days);
    for (double& c : costs) c = rng.next_double();

    auto base = make_continuous(n, costs);
    const std::vector<int> perm = random_permutation(rng, n);
    std::vector<double> shuffled(costs.size());
    for (int t = 0; t < days; ++t)
      for (int i = 0; i < n; ++i)
        shuffled[static_cast<std::size_t>(t) * n + static_cast<std::size_t>(perm[i])] =
            costs[static_cast<std::size_t>(t) * n + static_cast<std::size_t>(i)];
    auto permuted = make_continuous(n, shuffled);

    CHECK(best_expert_cost(base).total_cost ==
          doctest::Approx(best_expert_cost(permuted).total_cost));
  }
}

TEST_CASE("instance text round-trips") {
  SUBCASE("discrete") {
    auto inst = Instance::discrete(3, {1, 0, 1, 0, 0, 1}, {1, 0});
    std::stringstream ss;
    inst.write(ss);
    auto back = Instance::read(ss);
    CHECK(back.experts() == 3);
    CHECK(back.days() == 2);
    for (int t = 0; t < 2; ++t) {
      CHECK(back.outcome(t) == inst.outcome(t));
      for (int i = 0; i < 3; ++i) CHECK(back.cost(t, i) == inst.cost(t, i));
    }
  }
  SUBCASE("continuous keeps exact doubles") {
    auto inst = make_continuous(2, {0.1, 0.7, 0.333333333333333314, 0.25}, 0.75);
    std::stringstream ss;
    inst.write(ss);
    auto back = Instance::read(ss);
    CHECK(back.cost_model().width == inst.cost_model().width);
    for (int t = 0; t < 2; ++t)
      for (int i = 0; i < 2; ++i) CHECK(back.cost(t, i) == inst.cost(t, i));
  }
  SUBCASE("malformed header rejected") {
    std::stringstream ss("2 x discrete");
    CHECK_THROWS(Instance::read(ss));
  }
  SUBCASE("bad mode rejected") {
    std::stringstream ss("2 1 fancy\n0 0 1\n");
    CHECK_THROWS_AS(Instance::read(ss), std::invalid_argument);
  }
}

TEST_CASE("rng streams are deterministic and split independently") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("sample_subset produces sorted unique k-subsets") {
  Rng rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng.below(20));
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
    const auto s = sample_subset(rng, n, k);
    CHECK(static_cast<int>(s.size()) == k);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s[i] < s[i + 1]);
    if (!s.empty()) {
      CHECK(s.front() >= 0);
      CHECK(s.back() < n);
    }
  }
}
