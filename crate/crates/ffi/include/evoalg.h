#ifndef EVOALG_H
#define EVOALG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Which report `evoalg_analyze_json` produces (passed as its integer value).
 */
typedef enum EvoAnalysis {
  EVO_ANALYSIS_ALL = 0,
  EVO_ANALYSIS_BARIC = 1,
  EVO_ANALYSIS_NILPOTENT = 2,
  EVO_ANALYSIS_IDEMPOTENT = 3,
  EVO_ANALYSIS_DECOMPOSE = 4,
  EVO_ANALYSIS_CANONICAL = 5,
} EvoAnalysis;

typedef enum EvoStatus {
  EVO_STATUS_OK = 0,
  EVO_STATUS_NULL_POINTER = 1,
  EVO_STATUS_INVALID_ARGUMENT = 2,
  EVO_STATUS_PARSE_ERROR = 3,
  EVO_STATUS_PRECONDITION_FAILED = 4,
  EVO_STATUS_PANIC = 5,
} EvoStatus;

/**
 * Opaque algebra handle.
 */
typedef struct EvoAlgebra EvoAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON algebra document (fields `n`, `pi`, `tau`, `a_pi`,
 * `a_tau`) into a new handle written to `*out`.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum EvoStatus evoalg_algebra_from_json(const char *json, struct EvoAlgebra **out);

/**
 * Builds an algebra from 1-based permutation images and coefficient
 * numerator/denominator arrays, all of length `n`.
 *
 * # Safety
 * Every array pointer must reference `n` readable elements; `out` must be
 * a valid pointer.
 */
enum EvoStatus evoalg_algebra_new(size_t n,
                                  const size_t *pi,
                                  const size_t *tau,
                                  const int64_t *a_pi_num,
                                  const int64_t *a_pi_den,
                                  const int64_t *a_tau_num,
                                  const int64_t *a_tau_den,
                                  struct EvoAlgebra **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from this library and not have been freed already.
 */
void evoalg_algebra_free(struct EvoAlgebra *h);

/**
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EvoStatus evoalg_algebra_dim(const struct EvoAlgebra *h, size_t *out);

/**
 * Number of coordinate weight functions.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EvoStatus evoalg_weight_function_count(const struct EvoAlgebra *h, size_t *out);

/**
 * Free parameters of the absolute nilpotent family; zero means the
 * trivial element is the only one.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EvoStatus evoalg_nilpotent_free_params(const struct EvoAlgebra *h, size_t *out);

/**
 * Writes the JSON report for `which` (an `EvoAnalysis` value) to `*out`;
 * free it with `evoalg_string_free`. `seed` drives the randomized
 * character checks.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EvoStatus evoalg_analyze_json(const struct EvoAlgebra *h,
                                   int32_t which,
                                   uint64_t seed,
                                   char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void evoalg_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null after a
 * successful call. Valid until the next call into this library on the same
 * thread.
 */
const char *evoalg_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EVOALG_H */
