#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "generators.hpp"
#include "rng.hpp"

using namespace expool;

TEST_CASE("gen_iid degenerate accuracies") {
  SUBCASE("accuracy 1 everywhere: no expert ever errs") {
    auto inst = gen_iid({4, 64, {1.0, 1.0, 1.0, 1.0}}, 1);
    for (int t = 0; t < inst.days(); ++t)
      for (int i = 0; i < 4; ++i) CHECK(inst.cost(t, i) == doctest::Approx(0.0));
  }
  SUBCASE("accuracy 0 everywhere: every expert errs every day") {
    auto inst = gen_iid({3, 64, {0.0, 0.0, 0.0}}, 1);
    for (int t = 0; t < inst.days(); ++t)
      for (int i = 0; i < 3; ++i) CHECK(inst.cost(t, i) == doctest::Approx(1.0));
  }
  SUBCASE("accuracy outside [0,1] rejected") {
    CHECK_THROWS_AS(gen_iid({1, 4, {1.5}}, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_iid({2, 4, {0.5}}, 1), std::invalid_argument);
  }
}

TEST_CASE("gen_iid empirical mistake rate concentrates") {
  auto inst = gen_iid({2, 10000, {0.9, 0.5}}, 77);
  double mistakes = 0.0;
  for (int t = 0; t < inst.days(); ++t) mistakes += inst.cost(t, 0);
  const double rate = mistakes / inst.days();
  CHECK(rate > 0.09);
  CHECK(rate < 0.11);
}

TEST_CASE("generators are deterministic functions of (spec, seed)") {
  const IidSpec spec{5, 200, {0.9, 0.5, 0.5, 0.5, 0.2}};
  auto a = gen_iid(spec, 123);
  auto b = gen_iid(spec, 123);
  auto c = gen_iid(spec, 124);
  bool same = true;
  bool diff = false;
  for (int t = 0; t < 200; ++t) {
    if (a.outcome(t) != b.outcome(t)) same = false;
    if (a.outcome(t) != c.outcome(t)) diff = true;
    for (int i = 0; i < 5; ++i) {
      if (a.predictions(t)[i] != b.predictions(t)[i]) same = false;
      if (a.predictions(t)[i] != c.predictions(t)[i]) diff = true;
    }
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("permute_days") {
  SUBCASE("single day is untouched") {
    auto base = gen_iid({3, 1, {0.5, 0.5, 0.5}}, 9);
    auto shuffled = permute_days(base, 4242);
    CHECK(shuffled.outcome(0) == base.outcome(0));
    for (int i = 0; i < 3; ++i)
      CHECK(shuffled.predictions(0)[i] == base.predictions(0)[i]);
  }
  SUBCASE("same seed gives the same ordering") {
    auto base = gen_iid({2, 16, {0.9, 0.1}}, 9);
    auto s1 = permute_days(base, 5);
    auto s2 = permute_days(base, 5);
    for (int t = 0; t < 16; ++t) CHECK(s1.outcome(t) == s2.outcome(t));
  }
  SUBCASE("all T=3 orderings appear with frequency 1/6") {
    // three distinguishable days encoded in the outcome+prediction pattern
    auto base = Instance::discrete(2, {0, 0, 1, 0, 1, 1}, {0, 1, 0});
    auto day_id = [](const Instance& inst, int t) {
      return inst.outcome(t) * 4 + inst.predictions(t)[0] * 2 + inst.predictions(t)[1];
    };
    std::map<std::string, int> counts;
    const int reps = 10000;
    for (int s = 0; s < reps; ++s) {
      auto shuffled = permute_days(base, static_cast<std::uint64_t>(s));
      std::string key;
      for (int t = 0; t < 3; ++t) key.push_back(static_cast<char>('0' + day_id(shuffled, t)));
      counts[key]++;
    }
    CHECK(counts.size() == 6);
    for (const auto& [key, cnt] : counts) {
      const double freq = static_cast<double>(cnt) / reps;
      CHECK(freq > 1.0 / 6.0 - 0.02);
      CHECK(freq < 1.0 / 6.0 + 0.02);
    }
  }
  SUBCASE("continuous instances permute rows intact") {
    auto base = Instance::continuous(2, 2.0, {0.2, 1.8, 1.0, 0.4, 0.6, 0.8});
    auto shuffled = permute_days(base, 31);
    double base_total = 0.0;
    double shuf_total = 0.0;
    for (int t = 0; t < 3; ++t)
      for (int i = 0; i < 2; ++i) {
        base_total += base.cost(t, i);
        shuf_total += shuffled.cost(t, i);
      }
    CHECK(base_total == doctest::Approx(shuf_total));
  }
}

TEST_CASE("gen_diffdist bias structure") {
  SUBCASE("NO case: every column is a fair coin") {
    const auto m = gen_diffdist({8, 10000, 0.25, false, 0}, 3);
    for (int i = 0; i < 8; ++i) {
      double mean = 0.0;
      for (int t = 0; t < m.rows; ++t) mean += m.row(t)[static_cast<std::size_t>(i)];
      mean /= m.rows;
      CHECK(mean > 0.5 - 3 * 0.005);
      CHECK(mean < 0.5 + 3 * 0.005);
    }
  }
  SUBCASE("YES case: only the planted column is biased") {
    const int planted = 3;
    const auto m = gen_diffdist({8, 10000, 0.25, true, planted}, 3);
    for (int i = 0; i < 8; ++i) {
      double mean = 0.0;
      for (int t = 0; t < m.rows; ++t) mean += m.row(t)[static_cast<std::size_t>(i)];
      mean /= m.rows;
      const double target = i == planted ? 0.75 : 0.5;
      CHECK(mean > target - 3 * 0.005);
      CHECK(mean < target + 3 * 0.005);
    }
  }
  SUBCASE("epsilon 0 makes the cases identical") {
    const auto yes = gen_diffdist({4, 200, 0.0, true, 2}, 11);
    const auto no = gen_diffdist({4, 200, 0.0, false, 0}, 11);
    CHECK(yes.bits == no.bits);
  }
  SUBCASE("epsilon above 1/2 rejected") {
    CHECK_THROWS_AS(gen_diffdist({4, 10, 0.6, false, 0}, 1), std::invalid_argument);
  }
}

TEST_CASE("gen_buildup schedule") {
  SUBCASE("k0=2: one clean phase, then expert 1 always wrong") {
    auto inst = gen_buildup(2, 32);
    for (int t = 0; t < 32; ++t) {
      CHECK(inst.outcome(t) == 1);
      CHECK(inst.cost(t, 0) == doctest::Approx(0.0));
      const double expected = t + 1 > 16 ? 1.0 : 0.0;
      CHECK(inst.cost(t, 1) == doctest::Approx(expected));
    }
  }
  SUBCASE("k0=8: waves halve and start at doubling boundaries") {
    const int k0 = 8;
    const int days = 64;  // phase0 = 8
    auto inst = gen_buildup(k0, days);
    // wave start days: experts 4..7 at day 9, 2..3 at day 17, 1 at day 33
    auto first_wrong_day = [&inst, days](int expert) {
      for (int t = 0; t < days; ++t)
        if (inst.cost(t, expert) > 0.5) return t + 1;
      return days + 1;
    };
    CHECK(first_wrong_day(0) == days + 1);
    CHECK(first_wrong_day(1) == 33);
    CHECK(first_wrong_day(2) == 17);
    CHECK(first_wrong_day(3) == 17);
    for (int e = 4; e < 8; ++e) CHECK(first_wrong_day(e) == 9);
    // once wrong, always wrong
    for (int e = 1; e < 8; ++e)
      for (int t = first_wrong_day(e) - 1; t < days; ++t)
        CHECK(inst.cost(t, e) == doctest::Approx(1.0));
  }
  SUBCASE("invalid shapes rejected") {
    CHECK_THROWS_AS(gen_buildup(6, 64), std::invalid_argument);
    CHECK_THROWS_AS(gen_buildup(64, 32), std::invalid_argument);
  }
}

TEST_CASE("gen_planted_bursts") {
  SUBCASE("zero mistakes: designated expert is perfect") {
    auto inst = gen_planted_bursts(4, 64, 0, 1, 5);
    for (int t = 0; t < 64; ++t) CHECK(inst.cost(t, 0) == doctest::Approx(0.0));
  }
  SUBCASE("mistakes = T: designated expert is always wrong") {
    auto inst = gen_planted_bursts(4, 64, 64, 16, 5);
    for (int t = 0; t < 64; ++t) CHECK(inst.cost(t, 0) == doctest::Approx(1.0));
  }
  SUBCASE("one burst is one maximal run") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto inst = gen_planted_bursts(2, 512, 64, 64, seed);
      int runs = 0;
      int current = 0;
      int longest = 0;
      for (int t = 0; t < 512; ++t) {
        if (inst.cost(t, 0) > 0.5) {
          if (current == 0) ++runs;
          ++current;
          longest = std::max(longest, current);
        } else {
          current = 0;
        }
      }
      CHECK(runs == 1);
      CHECK(longest == 64);
    }
  }
  SUBCASE("multiple bursts stay separated and total M") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto inst = gen_planted_bursts(2, 256, 24, 8, seed);
      int total = 0;
      int runs = 0;
      int current = 0;
      for (int t = 0; t < 256; ++t) {
        if (inst.cost(t, 0) > 0.5) {
          if (current == 0) ++runs;
          ++current;
          ++total;
          CHECK(current <= 8);
        } else {
          current = 0;
        }
      }
      CHECK(total == 24);
      CHECK(runs == 3);
    }
  }
  SUBCASE("infeasible packing rejected") {
    // 3 bursts of 3 plus 2 separators need 11 > 10 days
    CHECK_THROWS_AS(gen_planted_bursts(2, 10, 9, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_planted_bursts(2, 10, 11, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(gen_planted_bursts(2, 10, 4, 5, 1), std::invalid_argument);
  }
}
