/* expool - memory-bounded prediction-with-experts toolkit.
 *
 * C interface to the shared library: opaque handles, status codes, and a
 * thread-local message for the last failing call. All functions returning
 * expool_status leave *out untouched on failure.
 */
#ifndef EXPOOL_H
#define EXPOOL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum expool_status {
  EXPOOL_OK = 0,
  EXPOOL_ERR_INVALID_ARGUMENT = 1, /* malformed spec, config, or parameter */
  EXPOOL_ERR_IO = 2,               /* file could not be read or written */
  EXPOOL_ERR_PREMISE = 3,          /* delta below the guarantee's lower bound */
  EXPOOL_ERR_INVARIANT = 4,        /* a run-time invariant check fired */
  EXPOOL_ERR_INTERNAL = 5
} expool_status;

typedef struct expool_instance expool_instance;
typedef struct expool_result expool_result;
typedef struct expool_reduction expool_reduction;

const char* expool_status_name(expool_status status);

/* Message describing the last failure observed by the calling thread. */
const char* expool_last_error(void);

/* --- Instances ----------------------------------------------------------
 * Text format: header `n T mode` with mode `discrete` or `continuous:RHO`,
 * then one line per day (`y x_1 ... x_n` discrete, `c_1 ... c_n`
 * continuous). Generator specs are `kind:key=value,...`; see the CLI help
 * or README for the kinds.
 */
expool_status expool_instance_read(const char* path, expool_instance** out);
expool_status expool_instance_generate(const char* genspec, uint64_t seed,
                                       expool_instance** out);
expool_status expool_instance_write(const expool_instance* inst, const char* path);
int expool_instance_experts(const expool_instance* inst);
int expool_instance_days(const expool_instance* inst);
void expool_instance_free(expool_instance* inst);

/* --- Experiments --------------------------------------------------------
 * Configs are `key = value` text mirroring the run configuration file.
 */
expool_status expool_run_config_file(const char* path, expool_result** out);
expool_status expool_run_config_text(const char* text, expool_result** out);

int expool_result_trials(const expool_result* res);
int expool_result_failures(const expool_result* res);
double expool_result_mean_regret(const expool_result* res);
double expool_result_median_regret(const expool_result* res);
double expool_result_frac_within_delta(const expool_result* res);
double expool_result_mean_rounds(const expool_result* res);
uint64_t expool_result_max_peak_words(const expool_result* res);
expool_status expool_result_write_csv(const expool_result* res, const char* path);
/* Human-readable aggregate; returns the length written (excluding the NUL). */
size_t expool_result_summary(const expool_result* res, char* buf, size_t len);
void expool_result_free(expool_result* res);

/* Sweep the configured pooled algorithm over a comma-separated delta list
 * and write the (delta, k, peak_words, mean_regret) table. */
expool_status expool_frontier(const char* config_path, const char* deltas,
                              const char* out_csv);

/* --- Masked detection experiment ----------------------------------------
 * epsilon < 0 selects the default planted bias delta*(c+1); experts/days
 * <= 0 select the defaults 32 and 2000.
 */
expool_status expool_reduce(int yes_case, double delta, double epsilon, int experts,
                            int days, int trials, uint64_t seed, expool_reduction** out);
int expool_reduction_trials(const expool_reduction* red);
int expool_reduction_correct(const expool_reduction* red);
double expool_reduction_mean_accuracy(const expool_reduction* red);
expool_status expool_reduction_write_csv(const expool_reduction* red, const char* path);
void expool_reduction_free(expool_reduction* red);

#ifdef __cplusplus
}
#endif

#endif /* EXPOOL_H */
