#ifndef FINSLER_LAB_H
#define FINSLER_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirror the CLI exit contract, extended with argument
 * validation codes that only make sense at the ABI boundary.
 */
typedef enum FinlabStatus {
  FinlabStatus_Ok = 0,
  FinlabStatus_CheckFailed = 1,
  FinlabStatus_ConfigError = 2,
  FinlabStatus_EvalError = 3,
  FinlabStatus_NullArgument = 4,
  FinlabStatus_InvalidUtf8 = 5,
} FinlabStatus;

/**
 * Opaque campaign handle: a parsed configuration plus, after execution,
 * the report and its serialized forms.
 */
typedef struct FinlabRun FinlabRun;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * ABI revision; bump on any breaking change to this interface.
 */
uint32_t finlab_abi_version(void);

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *finlab_last_error_message(void);

/**
 * Parse a JSON run configuration into a fresh handle. On success the
 * handle is written to `out` and must be released with `finlab_run_free`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid
 * location to store a pointer.
 */
enum FinlabStatus finlab_run_new(const char *config_json, struct FinlabRun **out);

/**
 * Run the handle's configured checks. Returns Ok when every check
 * passed, CheckFailed when a tolerance was exceeded, EvalError when a
 * check errored or the campaign could not run.
 *
 * # Safety
 * `run` must be a live pointer from `finlab_run_new`.
 */
enum FinlabStatus finlab_run_execute(struct FinlabRun *run);

/**
 * Serialized report of an executed run, owned by the handle; NULL until
 * `finlab_run_execute` produced a report.
 *
 * # Safety
 * `run` must be a live pointer from `finlab_run_new`.
 */
const char *finlab_run_report_json(const struct FinlabRun *run);

/**
 * Content hash of an executed run (hex SHA-256 over the clock-free
 * projection of the report); NULL until executed.
 *
 * # Safety
 * `run` must be a live pointer from `finlab_run_new`.
 */
const char *finlab_run_content_hash(const struct FinlabRun *run);

/**
 * Number of checks the handle's configuration selects.
 *
 * # Safety
 * `run` must be a live pointer from `finlab_run_new`.
 */
size_t finlab_run_check_count(const struct FinlabRun *run);

/**
 * Evaluate the handle's configured metric scalar at a chart point.
 * `x` and `y` must each hold the metric's dimension of coordinates.
 *
 * # Safety
 * `run`, `x`, `y`, `out_l` must be live pointers; `x` and `y` must point
 * to `nx` and `ny` readable doubles.
 */
enum FinlabStatus finlab_metric_value(const struct FinlabRun *run,
                                      const double *x,
                                      size_t nx,
                                      const double *y,
                                      size_t ny,
                                      double *out_l);

/**
 * Release a handle. NULL is a no-op.
 *
 * # Safety
 * `run` must be NULL or a pointer from `finlab_run_new` not yet freed.
 */
void finlab_run_free(struct FinlabRun *run);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* FINSLER_LAB_H */
