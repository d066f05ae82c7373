#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "generators.hpp"
#include "predictor.hpp"
#include "rng.hpp"

namespace expool {

// Constants of the masked detection-to-experts reduction.
struct ReductionParams {
  double delta = 0.0;
  double c = 0.0;                   // sqrt(2 ln 24)
  double offset = 0.0;              // delta * (c + 1), the planted bias
  double decision_threshold = 0.0;  // (1 + delta * c) / 2

  // Valid for delta in (0, 1/(2(c+1))]; 1/2 + offset must stay a probability.
  static ReductionParams make(double delta);
};

// XORs a fair-coin mask into the day's bits and sets the outcome to
// mask ^ 1, so an expert is correct exactly when its original bit is 1.
void mask_day(std::span<const std::uint8_t> bits, int mask,
              std::span<std::uint8_t> masked_out, int* outcome);

struct ReductionVerdict {
  double accuracy = 0.0;  // S, the fraction of days the predictor was correct
  int decision = 0;       // 1 iff accuracy >= decision threshold
  std::vector<std::uint8_t> correct_days;
};

// Drives the predictor through the masked stream, one fresh mask per day
// from `mask_rng` (independent of the predictor's own randomness), and
// thresholds the resulting accuracy.
ReductionVerdict run_reduction(Predictor& alg, const BitMatrix& bits,
                               const ReductionParams& params, Rng& mask_rng);

}  // namespace expool
