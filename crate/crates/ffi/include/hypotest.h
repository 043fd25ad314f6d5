#ifndef HYPOTEST_H
#define HYPOTEST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HtStatus {
  HT_STATUS_OK = 0,
  /**
   * A check or sweep ran to completion and something failed.
   */
  HT_STATUS_FAILURES = 1,
  /**
   * Domain, regime or configuration error.
   */
  HT_STATUS_DOMAIN = 2,
  HT_STATUS_HYPOTHESIS = 3,
  /**
   * No convergence, overflow or a degenerate functional.
   */
  HT_STATUS_NUMERIC = 4,
  HT_STATUS_NULL_POINTER = 5,
  HT_STATUS_INVALID_ARGUMENT = 6,
  HT_STATUS_PANIC = 7,
} HtStatus;

/**
 * Opaque sweep report.
 */
typedef struct HtSweepReport HtSweepReport;

/**
 * Result of [`ht_eval`].
 */
typedef struct HtEvalResult {
  double value;
  double abs_error_est;
  uint64_t terms_used;
} HtEvalResult;

/**
 * Result of [`ht_check`]. Absent bounds and margins are NaN.
 */
typedef struct HtCheckResult {
  double value;
  double lower;
  double upper;
  double margin_lower;
  double margin_upper;
  double eval_error_budget;
  bool pass;
  bool strictness_unresolved;
} HtCheckResult;

typedef struct HtTotals {
  uint64_t checks;
  uint64_t passed;
  uint64_t failed;
  uint64_t errors;
  uint64_t skipped;
  uint64_t strictness_unresolved;
} HtTotals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next library call on the same thread.
 */
const char *ht_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void ht_string_free(char *s);

/**
 * `F(a, b; c; x)` for `x` in `[0, 1)`.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum HtStatus ht_eval(double a, double b, double c, double x, struct HtEvalResult *out);

/**
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum HtStatus ht_gamma(double x, double *out);

/**
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum HtStatus ht_beta(double x, double y, double *out);

/**
 * `R(a, b) = -2 γ - ψ(a) - ψ(b)`.
 *
 * # Safety
 * `out` must be NULL or valid for writes.
 */
enum HtStatus ht_r_coeff(double a, double b, double *out);

/**
 * Check theorem `id` (e.g. `"T3_5_1"`).
 *
 * Triple predicates take `(p0, p1, p2) = (a, b, c)`; pair predicates take
 * `(p0, p1) = (c, d)` and ignore `p2`. Point predicates use `(x, y)`;
 * scalar ones take `t = x`. Returns `Ok` if the predicate holds and
 * `Failures` if it does not; `out` is filled in both cases.
 *
 * # Safety
 * `id` must be NULL or a NUL-terminated string; `out` NULL or valid for
 * writes.
 */
enum HtStatus ht_check(const char *id,
                       double p0,
                       double p1,
                       double p2,
                       double x,
                       double y,
                       struct HtCheckResult *out);

/**
 * Run the sweep described by the JSON document `spec_json` on `threads`
 * workers (0 means one per core). On `Ok` or `Failures` `*out` receives a
 * report to be released with [`ht_report_free`]; otherwise it is set to
 * NULL.
 *
 * # Safety
 * `spec_json` must be NULL or a NUL-terminated string; `out` NULL or valid
 * for writes.
 */
enum HtStatus ht_sweep_run_json(const char *spec_json,
                                uint32_t threads,
                                struct HtSweepReport **out);

/**
 * # Safety
 * `report` must be NULL or a live report; `out` NULL or valid for writes.
 */
enum HtStatus ht_report_totals(const struct HtSweepReport *report_ptr, struct HtTotals *out);

/**
 * The report as JSON; free with [`ht_string_free`].
 *
 * # Safety
 * `report` must be NULL or a live report; `out` NULL or valid for writes.
 */
enum HtStatus ht_report_to_json(const struct HtSweepReport *report_ptr, char **out);

/**
 * Per-check records as CSV; free with [`ht_string_free`].
 *
 * # Safety
 * `report` must be NULL or a live report; `out` NULL or valid for writes.
 */
enum HtStatus ht_report_to_csv(const struct HtSweepReport *report_ptr, char **out);

/**
 * # Safety
 * `report` must be NULL or a report from [`ht_sweep_run_json`], not yet
 * freed.
 */
void ht_report_free(struct HtSweepReport *report_ptr);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPOTEST_H */
