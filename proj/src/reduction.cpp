#include "reduction.hpp"

#include <cmath>
#include <stdexcept>

namespace expool {

ReductionParams ReductionParams::make(double delta) {
  ReductionParams p;
  p.c = std::sqrt(2.0 * std::log(24.0));
  const double max_delta = 1.0 / (2.0 * (p.c + 1.0));
  if (!(delta > 0.0 && delta <= max_delta))
    throw std::invalid_argument(
        "reduction: delta must lie in (0, 1/(2(c+1))] so the planted bias is a probability");
  p.delta = delta;
  p.offset = delta * (p.c + 1.0);
  p.decision_threshold = (1.0 + delta * p.c) / 2.0;
  return p;
}

void mask_day(std::span<const std::uint8_t> bits, int mask,
              std::span<std::uint8_t> masked_out, int* outcome) {
  if (mask != 0 && mask != 1) throw std::invalid_argument("mask_day: mask must be 0 or 1");
  if (masked_out.size() != bits.size())
    throw std::invalid_argument("mask_day: output span length must match input");
  const std::uint8_t m = static_cast<std::uint8_t>(mask);
  for (std::size_t i = 0; i < bits.size(); ++i) masked_out[i] = bits[i] ^ m;
  if (outcome) *outcome = mask ^ 1;
}

ReductionVerdict run_reduction(Predictor& alg, const BitMatrix& bits,
                               const ReductionParams& params, Rng& mask_rng) {
  if (alg.input_mode() != InputMode::discrete)
    throw std::invalid_argument("run_reduction: predictor must accept discrete input");
  if (bits.rows < 1 || bits.cols < 1)
    throw std::invalid_argument("run_reduction: empty bit matrix");

  ReductionVerdict verdict;
  verdict.correct_days.resize(static_cast<std::size_t>(bits.rows));
  std::vector<std::uint8_t> masked(static_cast<std::size_t>(bits.cols));
  int correct_total = 0;

  for (int t = 0; t < bits.rows; ++t) {
    const int mask = mask_rng.next_bit();
    int outcome = 0;
    mask_day(bits.row(t), mask, masked, &outcome);

    DayInput in;
    in.predictions = masked;
    alg.begin_day(in);
    const Choice choice = alg.choose();
    if (choice.answer != 0 && choice.answer != 1)
      throw std::logic_error("run_reduction: predictor produced a non-binary answer");
    const int correct = (choice.answer ^ mask) == 1 ? 1 : 0;
    verdict.correct_days[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(correct);
    correct_total += correct;

    DayFeedback fb;
    fb.outcome = outcome;
    alg.observe(fb);
  }

  verdict.accuracy = static_cast<double>(correct_total) / static_cast<double>(bits.rows);
  verdict.decision = verdict.accuracy >= params.decision_threshold ? 1 : 0;
  return verdict;
}

}  // namespace expool
