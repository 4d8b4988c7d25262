#ifndef ARRANGELAB_H
#define ARRANGELAB_H

/* This header is generated by cbindgen from arrangelab-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum arrangelab_status {
  ARRANGELAB_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ARRANGELAB_NULL_POINTER = 1,
  /**
   * An input string was not valid UTF-8.
   */
  ARRANGELAB_INVALID_UTF8 = 2,
  /**
   * The input could not be parsed (JSON document or scalar grammar).
   */
  ARRANGELAB_PARSE_ERROR = 3,
  /**
   * The computation refused its preconditions (non-essential input,
   * positive characteristic, out-of-range index, ...).
   */
  ARRANGELAB_DOMAIN_ERROR = 4,
  /**
   * An internal invariant failed; report this as a bug.
   */
  ARRANGELAB_INTERNAL_ERROR = 5,
} arrangelab_status;

/**
 * Opaque handle to an immutable arrangement.
 */
typedef struct arrangelab_arrangement arrangelab_arrangement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *arrangelab_version(void);

/**
 * Message for the most recent failure on this thread; valid until the next
 * call into the library from the same thread.
 */
const char *arrangelab_last_error_message(void);

/**
 * Parses an arrangement file document (the CLI's JSON format) into a handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum arrangelab_status arrangelab_arrangement_from_json(const char *json,
                                                        struct arrangelab_arrangement **out);

/**
 * Builds a named family member from a spec document such as
 * `{"family":"grid","a":2,"b":2}` or
 * `{"family":"generic","n":6,"seed":7}`.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum arrangelab_status arrangelab_arrangement_generate(const char *spec_json,
                                                       struct arrangelab_arrangement **out);

/**
 * Renders the handle back to the canonical arrangement file document.
 *
 * # Safety
 * `handle` must come from this library; `out` must be valid.
 */
enum arrangelab_status arrangelab_arrangement_to_json(const struct arrangelab_arrangement *handle,
                                                      char **out);

/**
 * Number of lines, or 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or come from this library.
 */
size_t arrangelab_arrangement_line_count(const struct arrangelab_arrangement *handle);

/**
 * Full analysis report as JSON (`report_version` 1).
 *
 * # Safety
 * `handle` must come from this library; `out` must be valid.
 */
enum arrangelab_status arrangelab_analyze_json(const struct arrangelab_arrangement *handle,
                                               char **out);

/**
 * Restriction of one member line: points, multiplicities, exponents.
 *
 * # Safety
 * `handle` must come from this library; `out` must be valid.
 */
enum arrangelab_status arrangelab_restrict_json(const struct arrangelab_arrangement *handle,
                                                size_t line_index,
                                                char **out);

/**
 * Runs theorem checks: all of them when `theorem_id` is null, or the one
 * named check. `all_hold` (optional) receives 1 when every applicable check
 * holds. A nonzero `allow_positive_char` waives characteristic-zero
 * hypotheses.
 *
 * # Safety
 * `handle` must come from this library; `theorem_id` must be null or a
 * NUL-terminated string; `out` must be valid; `all_hold` may be null.
 */
enum arrangelab_status arrangelab_verify_json(const struct arrangelab_arrangement *handle,
                                              const char *theorem_id,
                                              int allow_positive_char,
                                              char **out,
                                              int *all_hold);

/**
 * Releases an arrangement handle. Null is ignored.
 *
 * # Safety
 * `handle` must be null or come from this library, and not be used after.
 */
void arrangelab_arrangement_free(struct arrangelab_arrangement *handle);

/**
 * Releases a string produced by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned through an out-parameter here, and
 * not be used after.
 */
void arrangelab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ARRANGELAB_H */
