#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace expool {

namespace {

// Substream tags; generation order within a day is canonical (outcome first,
// then experts ascending), so output depends only on (spec, seed).
constexpr std::uint64_t kDayTag = 0x6461790000000000ull;
constexpr std::uint64_t kPermTag = 0x7065726dull;
constexpr std::uint64_t kBurstTag = 0x6275727374ull;

Rng day_stream(std::uint64_t seed, int day) {
  return Rng(derive_seed(seed, kDayTag ^ static_cast<std::uint64_t>(day)));
}

bool is_power_of_two(int x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

Instance gen_iid(const IidSpec& spec, std::uint64_t seed) {
  if (spec.experts < 1 || spec.days < 1)
    throw std::invalid_argument("gen_iid: experts and days must be positive");
  if (spec.accuracies.size() != static_cast<std::size_t>(spec.experts))
    throw std::invalid_argument("gen_iid: accuracies length must match expert count");
  for (double a : spec.accuracies)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("gen_iid: accuracy outside [0, 1]");

  std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(spec.days));
  std::vector<std::uint8_t> preds(static_cast<std::size_t>(spec.days) *
                                  static_cast<std::size_t>(spec.experts));
  for (int t = 0; t < spec.days; ++t) {
    Rng ds = day_stream(seed, t);
    const int y = ds.next_bit();
    outcomes[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(y);
    const std::size_t base = static_cast<std::size_t>(t) * spec.experts;
    for (int i = 0; i < spec.experts; ++i) {
      const bool correct = ds.bernoulli(spec.accuracies[static_cast<std::size_t>(i)]);
      preds[base + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(correct ? y : 1 - y);
    }
  }
  return Instance::discrete(spec.experts, std::move(preds), std::move(outcomes));
}

Instance permute_days(const Instance& base, std::uint64_t seed) {
  const int days = base.days();
  const int n = base.experts();
  Rng rng(derive_seed(seed, kPermTag));
  const std::vector<int> perm = random_permutation(rng, days);

  if (base.cost_model().kind == CostKind::discrete) {
    std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(days));
    std::vector<std::uint8_t> preds(static_cast<std::size_t>(days) * static_cast<std::size_t>(n));
    for (int t = 0; t < days; ++t) {
      const int src = perm[static_cast<std::size_t>(t)];
      outcomes[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(base.outcome(src));
      const auto row = base.predictions(src);
      std::copy(row.begin(), row.end(), preds.begin() + static_cast<std::size_t>(t) * n);
    }
    return Instance::discrete(n, std::move(preds), std::move(outcomes));
  }

  const double width = base.cost_model().width;
  std::vector<double> costs(static_cast<std::size_t>(days) * static_cast<std::size_t>(n));
  for (int t = 0; t < days; ++t) {
    const int src = perm[static_cast<std::size_t>(t)];
    for (int i = 0; i < n; ++i)
      costs[static_cast<std::size_t>(t) * n + static_cast<std::size_t>(i)] =
          base.cost(src, i) * width;
  }
  return Instance::continuous(n, width, std::move(costs));
}

BitMatrix gen_diffdist(const DiffDistSpec& spec, std::uint64_t seed) {
  if (spec.experts < 1 || spec.days < 1)
    throw std::invalid_argument("gen_diffdist: experts and days must be positive");
  if (!(spec.epsilon >= 0.0 && spec.epsilon <= 0.5))
    throw std::invalid_argument("gen_diffdist: epsilon must lie in [0, 1/2]");
  if (spec.yes_case && (spec.planted_index < 0 || spec.planted_index >= spec.experts))
    throw std::invalid_argument("gen_diffdist: planted index outside [0, n)");

  BitMatrix m;
  m.rows = spec.days;
  m.cols = spec.experts;
  m.bits.resize(static_cast<std::size_t>(spec.days) * static_cast<std::size_t>(spec.experts));
  for (int t = 0; t < spec.days; ++t) {
    Rng ds = day_stream(seed, t);
    const std::size_t base = static_cast<std::size_t>(t) * spec.experts;
    for (int i = 0; i < spec.experts; ++i) {
      const double p =
          spec.yes_case && i == spec.planted_index ? 0.5 + spec.epsilon : 0.5;
      m.bits[base + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(ds.bernoulli(p));
    }
  }
  return m;
}

Instance gen_buildup(int k0, int days) {
  if (!is_power_of_two(k0) || k0 < 2)
    throw std::invalid_argument("gen_buildup: k0 must be a power of two, at least 2");
  if (days < k0)
    throw std::invalid_argument("gen_buildup: need at least k0 days for the doubling phases");

  const int phase0 = days / k0;
  int m = 0;
  while ((1 << (m + 1)) <= k0) ++m;  // m = log2(k0)

  // Expert j >= 1 belongs to wave i = m - floor(log2 j) and turns permanently
  // wrong at day phase0 * 2^(i-1) + 1; expert 0 never errs.
  std::vector<int> wrong_start(static_cast<std::size_t>(k0), 0);
  wrong_start[0] = days + 1;
  for (int j = 1; j < k0; ++j) {
    int lg = 0;
    while ((1 << (lg + 1)) <= j) ++lg;
    const int wave = m - lg;
    wrong_start[static_cast<std::size_t>(j)] = phase0 * (1 << (wave - 1)) + 1;
  }

  std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(days), 1);
  std::vector<std::uint8_t> preds(static_cast<std::size_t>(days) * static_cast<std::size_t>(k0));
  for (int t = 0; t < days; ++t) {
    const int day1 = t + 1;
    const std::size_t base = static_cast<std::size_t>(t) * k0;
    for (int j = 0; j < k0; ++j)
      preds[base + static_cast<std::size_t>(j)] =
          static_cast<std::uint8_t>(day1 >= wrong_start[static_cast<std::size_t>(j)] ? 0 : 1);
  }
  return Instance::discrete(k0, std::move(preds), std::move(outcomes));
}

Instance gen_planted_bursts(int experts, int days, int mistakes, int burst_len,
                            std::uint64_t seed) {
  if (experts < 1 || days < 1)
    throw std::invalid_argument("gen_planted_bursts: experts and days must be positive");
  if (mistakes < 0 || mistakes > days)
    throw std::invalid_argument("gen_planted_bursts: need 0 <= mistakes <= days");
  if (mistakes > 0 && (burst_len < 1 || burst_len > mistakes))
    throw std::invalid_argument("gen_planted_bursts: need 1 <= burst_len <= mistakes");

  std::vector<std::uint8_t> wrong(static_cast<std::size_t>(days), 0);
  if (mistakes == days) {
    std::fill(wrong.begin(), wrong.end(), std::uint8_t{1});
  } else if (mistakes > 0) {
    const int bursts = (mistakes + burst_len - 1) / burst_len;
    const int separators = bursts - 1;
    const int free_days = days - mistakes - separators;
    if (free_days < 0)
      throw std::invalid_argument(
          "gen_planted_bursts: bursts plus separating days do not fit in T");

    // Uniform composition of the free days into bursts+1 gaps (stars and
    // bars), then lay the bursts down with one mandatory day between them.
    Rng rng(derive_seed(seed, kBurstTag));
    std::vector<int> gaps(static_cast<std::size_t>(bursts) + 1, 0);
    if (free_days > 0) {
      const std::vector<int> cuts = sample_subset(rng, free_days + bursts, bursts);
      int prev = -1;
      for (int g = 0; g < bursts; ++g) {
        gaps[static_cast<std::size_t>(g)] = cuts[static_cast<std::size_t>(g)] - prev - 1;
        prev = cuts[static_cast<std::size_t>(g)];
      }
      gaps[static_cast<std::size_t>(bursts)] = free_days + bursts - 1 - prev;
    }

    int pos = 0;
    int remaining = mistakes;
    for (int b = 0; b < bursts; ++b) {
      pos += gaps[static_cast<std::size_t>(b)];
      if (b > 0) pos += 1;  // separator
      const int len = std::min(burst_len, remaining);
      for (int d = 0; d < len; ++d) wrong[static_cast<std::size_t>(pos + d)] = 1;
      pos += len;
      remaining -= len;
    }
  }

  std::vector<std::uint8_t> outcomes(static_cast<std::size_t>(days));
  std::vector<std::uint8_t> preds(static_cast<std::size_t>(days) *
                                  static_cast<std::size_t>(experts));
  for (int t = 0; t < days; ++t) {
    Rng ds = day_stream(seed, t);
    const int y = ds.next_bit();
    outcomes[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(y);
    const std::size_t base = static_cast<std::size_t>(t) * experts;
    preds[base] = static_cast<std::uint8_t>(wrong[static_cast<std::size_t>(t)] ? 1 - y : y);
    for (int i = 1; i < experts; ++i)
      preds[base + static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>(ds.next_bit() ? y : 1 - y);
  }
  return Instance::discrete(experts, std::move(preds), std::move(outcomes));
}

}  // namespace expool
