#include "expool.h"

#include <cstring>
#include <string>

#include "config.hpp"
#include "harness.hpp"
#include "pooled.hpp"
#include "types.hpp"

namespace {

thread_local std::string g_last_error;

expool_status classify(const std::exception& e) {
  if (dynamic_cast<const expool::PremiseError*>(&e)) return EXPOOL_ERR_PREMISE;
  if (dynamic_cast<const expool::InvariantError*>(&e)) return EXPOOL_ERR_INVARIANT;
  if (dynamic_cast<const std::invalid_argument*>(&e) ||
      dynamic_cast<const std::out_of_range*>(&e))
    return EXPOOL_ERR_INVALID_ARGUMENT;
  if (dynamic_cast<const std::runtime_error*>(&e)) return EXPOOL_ERR_IO;
  return EXPOOL_ERR_INTERNAL;
}

template <typename Fn>
expool_status wrap(Fn&& fn) {
  try {
    fn();
    return EXPOOL_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return classify(e);
  } catch (...) {
    g_last_error = "unknown error";
    return EXPOOL_ERR_INTERNAL;
  }
}

expool_status require_args(bool ok) {
  if (!ok) g_last_error = "null argument";
  return ok ? EXPOOL_OK : EXPOOL_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct expool_instance {
  expool::Instance value;
};

struct expool_result {
  expool::ExperimentResult value;
};

struct expool_reduction {
  expool::ReduceResult value;
};

extern "C" {

const char* expool_status_name(expool_status status) {
  switch (status) {
    case EXPOOL_OK: return "ok";
    case EXPOOL_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case EXPOOL_ERR_IO: return "io-error";
    case EXPOOL_ERR_PREMISE: return "premise-violation";
    case EXPOOL_ERR_INVARIANT: return "invariant-violation";
    case EXPOOL_ERR_INTERNAL: return "internal-error";
  }
  return "?";
}

const char* expool_last_error(void) { return g_last_error.c_str(); }

expool_status expool_instance_read(const char* path, expool_instance** out) {
  if (expool_status s = require_args(path && out)) return s;
  return wrap([&] { *out = new expool_instance{expool::Instance::read_file(path)}; });
}

expool_status expool_instance_generate(const char* genspec, uint64_t seed,
                                       expool_instance** out) {
  if (expool_status s = require_args(genspec && out)) return s;
  return wrap([&] {
    *out = new expool_instance{expool::materialize_stream(genspec, seed)};
  });
}

expool_status expool_instance_write(const expool_instance* inst, const char* path) {
  if (expool_status s = require_args(inst && path)) return s;
  return wrap([&] { inst->value.write_file(path); });
}

int expool_instance_experts(const expool_instance* inst) {
  return inst ? inst->value.experts() : 0;
}

int expool_instance_days(const expool_instance* inst) {
  return inst ? inst->value.days() : 0;
}

void expool_instance_free(expool_instance* inst) { delete inst; }

namespace {

void run_config_impl(const expool::ExperimentConfig& cfg, expool_result** out) {
  auto res = std::make_unique<expool_result>(expool_result{expool::run_experiment(cfg)});
  if (res->value.aggregate.failed) {
    for (const auto& row : res->value.rows) {
      if (row.ok) continue;
      if (row.kind == expool::FailKind::premise) throw expool::PremiseError(row.error);
      if (row.kind == expool::FailKind::invariant) throw expool::InvariantError(row.error);
      throw std::invalid_argument(row.error);
    }
  }
  *out = res.release();
}

}  // namespace

expool_status expool_run_config_file(const char* path, expool_result** out) {
  if (expool_status s = require_args(path && out)) return s;
  return wrap([&] { run_config_impl(expool::ExperimentConfig::from_file(path), out); });
}

expool_status expool_run_config_text(const char* text, expool_result** out) {
  if (expool_status s = require_args(text && out)) return s;
  return wrap([&] { run_config_impl(expool::ExperimentConfig::from_text(text), out); });
}

int expool_result_trials(const expool_result* res) {
  return res ? res->value.aggregate.trials : 0;
}

int expool_result_failures(const expool_result* res) {
  return res ? res->value.aggregate.failures : 0;
}

double expool_result_mean_regret(const expool_result* res) {
  return res ? res->value.aggregate.mean_regret : 0.0;
}

double expool_result_median_regret(const expool_result* res) {
  return res ? res->value.aggregate.median_regret : 0.0;
}

double expool_result_frac_within_delta(const expool_result* res) {
  return res ? res->value.aggregate.frac_within_delta : 0.0;
}

double expool_result_mean_rounds(const expool_result* res) {
  return res ? res->value.aggregate.mean_rounds : 0.0;
}

uint64_t expool_result_max_peak_words(const expool_result* res) {
  return res ? res->value.aggregate.max_peak_words : 0;
}

expool_status expool_result_write_csv(const expool_result* res, const char* path) {
  if (expool_status s = require_args(res && path)) return s;
  return wrap([&] { res->value.write_csv(path); });
}

size_t expool_result_summary(const expool_result* res, char* buf, size_t len) {
  if (!res || !buf || len == 0) return 0;
  const std::string text = res->value.summary();
  const size_t n = std::min(len - 1, text.size());
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
  return n;
}

void expool_result_free(expool_result* res) { delete res; }

expool_status expool_frontier(const char* config_path, const char* deltas,
                              const char* out_csv) {
  if (expool_status s = require_args(config_path && deltas && out_csv)) return s;
  return wrap([&] {
    const auto cfg = expool::ExperimentConfig::from_file(config_path);
    std::vector<double> ds;
    std::string item;
    for (const char* p = deltas;; ++p) {
      if (*p == ',' || *p == '\0') {
        if (!item.empty()) ds.push_back(std::stod(item));
        item.clear();
        if (*p == '\0') break;
      } else {
        item.push_back(*p);
      }
    }
    expool::memory_frontier(cfg, ds).write_csv(out_csv);
  });
}

expool_status expool_reduce(int yes_case, double delta, double epsilon, int experts,
                            int days, int trials, uint64_t seed, expool_reduction** out) {
  if (expool_status s = require_args(out != nullptr)) return s;
  return wrap([&] {
    std::optional<double> offset;
    if (epsilon >= 0.0) offset = epsilon;
    const int n = experts > 0 ? experts : 32;
    const int t = days > 0 ? days : 2000;
    *out = new expool_reduction{expool::run_reduce_experiment(
        yes_case != 0, delta, offset, n, t, trials, seed)};
  });
}

int expool_reduction_trials(const expool_reduction* red) {
  return red ? static_cast<int>(red->value.rows.size()) : 0;
}

int expool_reduction_correct(const expool_reduction* red) {
  return red ? red->value.correct_count : 0;
}

double expool_reduction_mean_accuracy(const expool_reduction* red) {
  return red ? red->value.mean_accuracy : 0.0;
}

expool_status expool_reduction_write_csv(const expool_reduction* red, const char* path) {
  if (expool_status s = require_args(red && path)) return s;
  return wrap([&] { red->value.write_csv(path); });
}

void expool_reduction_free(expool_reduction* red) { delete red; }

}  // extern "C"
