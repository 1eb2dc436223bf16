#ifndef FUZZYQUAD_H
#define FUZZYQUAD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FqNormKind {
  FQ_NORM_KIND_L1 = 0,
  FQ_NORM_KIND_L2 = 1,
  FQ_NORM_KIND_LINF = 2,
} FqNormKind;

typedef enum FqStatus {
  FQ_STATUS_OK = 0,
  FQ_STATUS_NULL_POINTER = 1,
  FQ_STATUS_INVALID_ARGUMENT = 2,
  FQ_STATUS_DIMENSION_MISMATCH = 3,
  FQ_STATUS_NON_FINITE = 4,
  FQ_STATUS_OVERFLOW = 5,
  FQ_STATUS_NOT_CONVERGED = 6,
  FQ_STATUS_DEGENERATE = 7,
  FQ_STATUS_CONFIG = 8,
  FQ_STATUS_IO = 9,
  FQ_STATUS_PANIC = 10,
} FqStatus;

/**
 * A fuzzy norm on ℝᵈ.
 */
typedef struct FqFuzzyNorm FqFuzzyNorm;

/**
 * The outcome of running a scenario.
 */
typedef struct FqRunResult FqRunResult;

/**
 * A validated scenario, ready to run.
 */
typedef struct FqScenario FqScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The last error message on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *fq_last_error(void);

/**
 * Library version as a static string.
 */
const char *fq_version(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void fq_string_free(char *s);

/**
 * `t / (t + k‖x‖)` for `t > 0`, else 0.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum FqStatus fq_fuzzy_norm_new_nk(double k,
                                   size_t dim,
                                   enum FqNormKind kind,
                                   struct FqFuzzyNorm **out);

/**
 * 1 when `t > ‖x‖`, else 0.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum FqStatus fq_fuzzy_norm_new_crisp(size_t dim, enum FqNormKind kind, struct FqFuzzyNorm **out);

/**
 * Membership of the `len`-vector `x` at level `t`.
 *
 * # Safety
 * `norm` must be a live handle, `x` must point to `len` doubles and `out`
 * must be valid for a write.
 */
enum FqStatus fq_fuzzy_norm_eval(const struct FqFuzzyNorm *norm,
                                 const double *x,
                                 size_t len,
                                 double t,
                                 double *out);

/**
 * # Safety
 * `norm` must be null or a live handle from this library.
 */
void fq_fuzzy_norm_free(struct FqFuzzyNorm *norm);

/**
 * `((2^{2-1/q} - 1) / 4)^q` for `q > 1/2`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FqStatus fq_quadratic_bound_constant(double q, double *out);

/**
 * `((2^{2-1/q} - 1) / 2)^q` for `q > 1/2`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FqStatus fq_sharp_quadratic_bound_constant(double q, double *out);

/**
 * Odd Pexider constants for `0 < |alpha| < 2`.
 *
 * # Safety
 * `c1` and `c2` must be valid for writes.
 */
enum FqStatus fq_odd_pexider_constants(double alpha, double *c1, double *c2);

/**
 * Even Pexider constants for `0 < |alpha| < 4`.
 *
 * # Safety
 * `c1` and `c2` must be valid for writes.
 */
enum FqStatus fq_even_pexider_constants(double alpha, double *c1, double *c2);

/**
 * Decomposition constant for `0 < |alpha| < 2`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FqStatus fq_decomposition_constant(double alpha, double *out);

/**
 * `4 / (2^{2-p} - 1)` for `0 <= p < 2`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum FqStatus fq_classical_constant(double p, double *out);

size_t fq_builtin_count(void);

/**
 * Name of builtin `index`, or null when out of range. The string is static.
 */
const char *fq_builtin_name(size_t index);

/**
 * # Safety
 * `name` must be a NUL-terminated string and `out` valid for a write.
 */
enum FqStatus fq_scenario_load_builtin(const char *name, struct FqScenario **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` valid for a write.
 */
enum FqStatus fq_scenario_load_file(const char *path, struct FqScenario **out);

/**
 * Parses a scenario from TOML source.
 *
 * # Safety
 * `toml` must be a NUL-terminated string and `out` valid for a write.
 */
enum FqStatus fq_scenario_from_toml(const char *toml, struct FqScenario **out);

/**
 * # Safety
 * `s` must be a live handle.
 */
enum FqStatus fq_scenario_set_seed(struct FqScenario *s, uint64_t seed);

/**
 * Runs the scenario on `jobs` threads; 0 uses the global pool.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for a write.
 */
enum FqStatus fq_scenario_run(const struct FqScenario *s, size_t jobs, struct FqRunResult **out);

/**
 * # Safety
 * `s` must be null or a live handle from this library.
 */
void fq_scenario_free(struct FqScenario *s);

/**
 * 0 success, 1 inequality failure, 2 convergence failure; -1 for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
int32_t fq_run_result_exit_code(const struct FqRunResult *r);

/**
 * Smallest margin over all rows; NaN when there are no rows.
 *
 * # Safety
 * `r` must be a live handle and `out` valid for a write.
 */
enum FqStatus fq_run_result_min_margin(const struct FqRunResult *r, double *out);

/**
 * The report CSV as a new string; free it with [`fq_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` valid for a write.
 */
enum FqStatus fq_run_result_csv(const struct FqRunResult *r, char **out);

/**
 * Writes `report.csv`, `report.json` and trace files into `dir`.
 *
 * # Safety
 * `r` must be a live handle and `dir` a NUL-terminated string.
 */
enum FqStatus fq_run_result_write(const struct FqRunResult *r, const char *dir);

/**
 * # Safety
 * `r` must be null or a live handle from this library.
 */
void fq_run_result_free(struct FqRunResult *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUZZYQUAD_H */
