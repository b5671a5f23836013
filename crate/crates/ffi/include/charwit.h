/* C interface to the charwit decision pipeline. */

#ifndef CHARWIT_H
#define CHARWIT_H

/* This file is generated from the Rust sources; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes returned by every fallible entry point.
 */
typedef enum CwStatus {
  /*
   Success; for `cw_job_run` this means a definitive answer.
   */
  CW_STATUS_OK = 0,
  /*
   The job ran, but the supplied order is below the certification
   threshold; output JSON is still produced.
   */
  CW_STATUS_INCONCLUSIVE = 1,
  /*
   A null handle or null string argument.
   */
  CW_STATUS_NULL_POINTER = 2,
  /*
   A string argument is not valid UTF-8.
   */
  CW_STATUS_UTF8_ERROR = 3,
  /*
   An argument value is out of range or unrecognized.
   */
  CW_STATUS_INVALID_ARGUMENT = 4,
  /*
   The input document is not valid JSON.
   */
  CW_STATUS_PARSE_ERROR = 5,
  /*
   The job failed; see `cw_job_last_error`.
   */
  CW_STATUS_RUN_ERROR = 6,
  /*
   A panic inside the library.
   */
  CW_STATUS_INTERNAL_ERROR = 7,
} CwStatus;

/*
 Opaque job handle.
 */
typedef struct CwJob CwJob;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a job for one of the commands: `decide`, `family`, `lemma9`,
 `oracle-omega`, `oracle-casimir`, `roundtrip`. Returns null for an
 unknown command. Free with `cw_job_free`.
 */
struct CwJob *cw_job_new(const char *command);

/*
 Releases a job handle. Null is accepted.
 */
void cw_job_free(struct CwJob *job);

/*
 Sets the truncation order (must be at least 1).
 */
enum CwStatus cw_job_set_order(struct CwJob *job, uint32_t order);

/*
 Sets the node budget for the decision procedure.
 */
enum CwStatus cw_job_set_max_nodes(struct CwJob *job, uint32_t max_nodes);

/*
 Sets the arithmetic mode: `"exact"` or `"float"`.
 */
enum CwStatus cw_job_set_mode(struct CwJob *job, const char *mode);

/*
 Sets the float-mode tolerance (must be positive).
 */
enum CwStatus cw_job_set_tolerance(struct CwJob *job, double tolerance);

/*
 Sets the inclusive rank range for family construction.
 */
enum CwStatus cw_job_set_n_range(struct CwJob *job, uint32_t lo, uint32_t hi);

/*
 Attaches the input document as a JSON string.
 */
enum CwStatus cw_job_set_input_json(struct CwJob *job, const char *input);

/*
 Runs the job. On `CW_STATUS_OK` and `CW_STATUS_INCONCLUSIVE`, `*out_json`
 receives a NUL-terminated JSON document owned by the caller (release with
 `cw_string_free`). On error, `*out_json` is set to null and the message
 is available through `cw_job_last_error`.
 */
enum CwStatus cw_job_run(struct CwJob *job, char **out_json);

/*
 Last error message on this job, or null; owned by the job and valid
 until the next call on it.
 */
const char *cw_job_last_error(const struct CwJob *job);

/*
 Releases a string returned by this library. Null is accepted.
 */
void cw_string_free(char *s);

/*
 Library version as a static string.
 */
const char *cw_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CHARWIT_H */
