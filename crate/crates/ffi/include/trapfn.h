#ifndef TRAPFN_H
#define TRAPFN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The numeric values match the CLI exit codes.
 */
typedef enum TrapfnStatus {
  TRAPFN_STATUS_OK = 0,
  /**
   * Null pointer, unknown function name or wrong parameter count.
   */
  TRAPFN_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Parameters outside the function's domain, or a pole.
   */
  TRAPFN_STATUS_DOMAIN = 2,
  /**
   * Overflow, term cap, non-finite term or imaginary residual too large.
   */
  TRAPFN_STATUS_ACCURACY = 3,
  /**
   * A golden-table comparison failed.
   */
  TRAPFN_STATUS_CHECK_FAILED = 4,
  /**
   * The library panicked; this is a bug.
   */
  TRAPFN_STATUS_PANIC = 5,
} TrapfnStatus;

/**
 * Opaque convergence study.
 */
typedef struct TrapfnReport TrapfnReport;

/**
 * One mesh level of a report: value `sig × 10^exp10` at mesh size `h`.
 */
typedef struct TrapfnLevel {
  double h;
  double sig;
  int32_t exp10;
  size_t terms;
} TrapfnLevel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Evaluates `function` at `params`, refining the mesh until two levels
 * agree, and stores the value as a double (which may be infinite or zero
 * when the result leaves the double range; see [`trapfn_eval_scaled`]).
 *
 * Function names and parameter orders are those of the CLI, e.g.
 * `"gamma-p"` with `{s, x}` or `"chf"` with `{a, b, x}`.
 *
 * # Safety
 * `function` must be a NUL-terminated string, `params` must point to
 * `n_params` doubles, and `out_value` must be writable.
 */
enum TrapfnStatus trapfn_eval(const char *function,
                              const double *params,
                              size_t n_params,
                              double *out_value);

/**
 * Like [`trapfn_eval`] but returns the value as `sig × 10^exp10`.
 *
 * # Safety
 * As [`trapfn_eval`]; `out_sig` and `out_exp10` must be writable.
 */
enum TrapfnStatus trapfn_eval_scaled(const char *function,
                                     const double *params,
                                     size_t n_params,
                                     double *out_sig,
                                     int32_t *out_exp10);

/**
 * Runs a mesh-halving study over all requested levels.
 *
 * `h0 <= 0` and `levels == 0` select the function's defaults. On success
 * `*out_report` owns a new report that must be released with
 * [`trapfn_report_free`].
 *
 * # Safety
 * As [`trapfn_eval`]; `out_report` must be writable.
 */
enum TrapfnStatus trapfn_converge(const char *function,
                                  const double *params,
                                  size_t n_params,
                                  double h0,
                                  size_t levels,
                                  struct TrapfnReport **out_report);

/**
 * Number of levels in `report` (0 for NULL).
 *
 * # Safety
 * `report` must be NULL or a live handle from [`trapfn_converge`].
 */
size_t trapfn_report_level_count(const struct TrapfnReport *report);

/**
 * Copies level `index` into `*out`.
 *
 * # Safety
 * `report` must be NULL or a live handle; `out` must be writable.
 */
enum TrapfnStatus trapfn_report_level(const struct TrapfnReport *report,
                                      size_t index,
                                      struct TrapfnLevel *out);

/**
 * Whether the last two levels agreed to the default tolerance.
 *
 * # Safety
 * `report` must be NULL or a live handle.
 */
bool trapfn_report_converged(const struct TrapfnReport *report);

/**
 * Final value as `sig × 10^exp10`.
 *
 * # Safety
 * `report` must be NULL or a live handle; outputs must be writable.
 */
enum TrapfnStatus trapfn_report_final(const struct TrapfnReport *report,
                                      double *out_sig,
                                      int32_t *out_exp10);

/**
 * Releases a report. NULL is ignored.
 *
 * # Safety
 * `report` must be NULL or a handle from [`trapfn_converge`] that has not
 * been freed.
 */
void trapfn_report_free(struct TrapfnReport *report);

/**
 * Recomputes golden table `id` (1 to 7) and compares the last printed row
 * of each column. Returns [`TrapfnStatus::CheckFailed`] if any cell is
 * outside its tolerance.
 *
 * # Safety
 * `out_max_rel_dev` must be NULL or writable.
 */
enum TrapfnStatus trapfn_table_check(uint32_t id, double *out_max_rel_dev);

/**
 * Message for the last failed call on this thread, or NULL after a
 * successful call. Valid until the next call into the library on the same
 * thread.
 */
const char *trapfn_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *trapfn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRAPFN_H */
