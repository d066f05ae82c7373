#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "baselines.hpp"
#include "types.hpp"

namespace expool {

enum class Algorithm { mw, fpl, alg3, alg4, alg5, alg5_estimated, naive_quarter };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

// Mirrors the run configuration file: `key = value` lines, '#' comments.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::mw;
  std::string stream;  // generator spec or file:PATH
  double delta = 0.5;  // pooled target regret (also the fixture's parameter)
  double epsilon = 0.5;                       // baseline learning rate
  std::optional<double> m_estimate;           // alg5 cost estimate; default: true best cost
  int trials = 1;
  std::uint64_t seed = 0;
  std::string out;  // results CSV path; empty writes no file
  int threads = 0;  // 0 = hardware concurrency
  InnerKind inner = InnerKind::mw_exact;
  MwMode mw_mode = MwMode::exact;
  std::optional<double> resample_threshold;  // alg4 override
  std::optional<int> k_override;             // pooled pool-size override
  double alg5_k_const = 16.0;

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

// Generator spec strings: `kind:key=value,key=value` with kinds
//   iid       n, T, best, rest (or accs=a0;a1;...)
//   planted   n, T, M, burst
//   buildup   k0, T
//   diffdist  n, T, eps, case=yes|no, L
//   file      the rest of the string is a path
// and the optional modifier perm=1 for a uniform day reordering.
Instance materialize_stream(const std::string& spec, std::uint64_t gen_seed);

}  // namespace expool
