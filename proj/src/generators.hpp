#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "types.hpp"

namespace expool {

// Product-of-Bernoullis day model: outcome is a fair coin; expert i matches
// it with probability accuracies[i], independently across days and experts.
struct IidSpec {
  int experts = 0;
  int days = 0;
  std::vector<double> accuracies;
};

Instance gen_iid(const IidSpec& spec, std::uint64_t seed);

// Uniformly random reordering of the day sequence; expert columns within
// each day are untouched.
Instance permute_days(const Instance& base, std::uint64_t seed);

struct BitMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;  // row-major

  std::span<const std::uint8_t> row(int r) const {
    return {bits.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

// Detection-problem input: every bit a fair coin (NO case), or one planted
// column biased to 1/2 + epsilon (YES case).
struct DiffDistSpec {
  int experts = 0;
  int days = 0;
  double epsilon = 0.0;
  bool yes_case = false;
  int planted_index = 0;  // YES case only
};

BitMatrix gen_diffdist(const DiffDistSpec& spec, std::uint64_t seed);

// Error build-up schedule: an all-correct opening phase of T/k0 days, then
// doubling phases in which exactly half of the surviving experts turn
// permanently wrong, halving the survivor set each phase. Expert 0 is
// perfect; the outcome is 1 on every day. k0 must be a power of two and is
// also the expert count.
Instance gen_buildup(int k0, int days);

// One designated expert (index 0) makes exactly `mistakes` errors packed in
// contiguous bursts of `burst_len` at seeded positions, separated by at
// least one correct day; all other experts are fair coins.
Instance gen_planted_bursts(int experts, int days, int mistakes, int burst_len,
                            std::uint64_t seed);

}  // namespace expool
