#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace expool {

// splitmix64 finalizer. Every seed derivation in the project goes through
// this function, so streams are reproducible from (seed, tag) pairs alone.
inline std::uint64_t scramble64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Published seed-splitting rule: substream seed for (seed, tag).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return scramble64(scramble64(seed) ^ scramble64(tag ^ 0xD1B54A32D192ED03ull));
}

// Deterministic 64-bit stream (splitmix64). Self-contained so that results
// do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

  bool bernoulli(double p) { return next_double() < p; }

  // Standard exponential (rate 1) by inversion.
  double exponential() { return -std::log1p(-next_double()); }

  // Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  Rng substream(std::uint64_t tag) const { return Rng(derive_seed(state_, tag)); }

 private:
  std::uint64_t state_;
};

// Uniform k-subset of {0, ..., n-1}, returned sorted ascending (Floyd).
inline std::vector<int> sample_subset(Rng& rng, int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("sample_subset: need 0 <= k <= n");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int j = n - k; j < n; ++j) {
    const int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    auto it = std::lower_bound(out.begin(), out.end(), v);
    if (it != out.end() && *it == v) {
      const int w = j;
      auto jt = std::lower_bound(out.begin(), out.end(), w);
      out.insert(jt, w);
    } else {
      out.insert(it, v);
    }
  }
  return out;
}

// In-place Fisher-Yates permutation of indices 0..count-1.
inline std::vector<int> random_permutation(Rng& rng, int count) {
  std::vector<int> perm(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = count - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

}  // namespace expool
