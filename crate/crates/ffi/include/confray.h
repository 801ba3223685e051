/* C interface to the confray conformal light-ray engine. */

#ifndef CONFRAY_H
#define CONFRAY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/* Opaque handles; create and destroy only through this API. */
typedef struct ConfrayField ConfrayField;
typedef struct ConfrayState ConfrayState;


/**
 * Status of a C-API call.
 */
typedef enum ConfrayStatus {
  CONFRAY_STATUS_OK = 0,
  /**
   * A required pointer argument was NULL.
   */
  CONFRAY_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CONFRAY_STATUS_INVALID_UTF8 = 2,
  /**
   * The field expression did not parse; see the last error message.
   */
  CONFRAY_STATUS_PARSE_ERROR = 3,
  /**
   * The field is not conformal; the message carries the residual.
   */
  CONFRAY_STATUS_NOT_CONFORMAL = 4,
  /**
   * The field lies outside the 15-generator span.
   */
  CONFRAY_STATUS_NOT_IN_SPAN = 5,
  /**
   * A JSON payload was malformed or violated an invariant.
   */
  CONFRAY_STATUS_INVALID_DATA = 6,
  /**
   * The state or momentum is massless where a mass is required.
   */
  CONFRAY_STATUS_MASSLESS = 7,
  /**
   * The suite or generator name is not recognised.
   */
  CONFRAY_STATUS_UNKNOWN_NAME = 8,
  /**
   * The suite configuration was rejected.
   */
  CONFRAY_STATUS_BAD_CONFIG = 9,
  /**
   * The suite ran to completion and reported failing cases.
   */
  CONFRAY_STATUS_SUITE_FAILURES = 10,
  /**
   * Symbolic evaluation failed (mass cap or null momentum).
   */
  CONFRAY_STATUS_EVALUATION_ERROR = 11,
  /**
   * The library caught a panic; state may be stale.
   */
  CONFRAY_STATUS_INTERNAL = 12,
} ConfrayStatus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the library version as a static string; do not free.
 */
const char *confray_version(void);

/**
 * Returns a copy of the most recent error message on this thread (empty if
 * none). Free with `confray_string_free`.
 */
char *confray_last_error_message(void);

/**
 * Frees a string returned by this library. NULL is a no-op.
 *
 * # Safety
 * `s` must have been returned by a confray function and not freed before.
 */
void confray_string_free(char *s);

/**
 * Parses a field expression (or generator keyword) into a handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_field_parse(const char *text, ConfrayField **out);

/**
 * Builds one of the 15 standard generators by name ("P0".."C3", "D").
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_field_standard(const char *name, ConfrayField **out);

/**
 * Frees a field handle. NULL is a no-op.
 *
 * # Safety
 * `field` must come from this library and not be freed twice.
 */
void confray_field_free(ConfrayField *field);

/**
 * Renders the canonical expression form of a field.
 *
 * # Safety
 * `field` must be a live handle; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_field_render(const ConfrayField *field, char **out);

/**
 * Computes the conformal factor λ(x) of a field, rendered as a polynomial
 * expression. Fails with `NotConformal` when the symmetrised derivative is
 * not proportional to the metric.
 *
 * # Safety
 * `field` must be a live handle; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_field_conformal_factor(const ConfrayField *field, char **out);

/**
 * Lie commutator of two fields as a new handle.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_field_commutator(const ConfrayField *a,
                                            const ConfrayField *b,
                                            ConfrayField **out);

/**
 * Decomposes a field over the 15-generator basis. Writes a JSON object
 * mapping generator names to rational coefficients (zeros omitted); fails
 * with `NotInSpan` when a residual remains.
 *
 * # Safety
 * `field` must be a live handle; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_field_decompose(const ConfrayField *field, char **out);

/**
 * Loads an event state from its JSON wire form
 * `{"alpha": "p/q", "rays": [...]}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_state_from_json(const char *json, ConfrayState **out);

/**
 * Frees a state handle. NULL is a no-op.
 *
 * # Safety
 * `state` must come from this library and not be freed twice.
 */
void confray_state_free(ConfrayState *state);

/**
 * Writes the observable report of a state (totals, mass, extracted
 * position, intersection residual, quantum correction) as JSON.
 *
 * # Safety
 * `state` must be a live handle; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_state_report_json(const ConfrayState *state, char **out);

/**
 * Builds the shift report of one generator at the given Casimir parameter,
 * optionally evaluated at a phase-space point supplied as two JSON arrays
 * (upper-index position, lower-index momentum). Pass NULL for both to skip
 * evaluation.
 *
 * # Safety
 * String arguments must be NUL-terminated or NULL as documented; `out`
 * must be a valid pointer.
 */
enum ConfrayStatus confray_shift_report_json(const char *kind,
                                             const char *alpha,
                                             const char *position_json,
                                             const char *momentum_json,
                                             char **out);

/**
 * Runs a verification suite and writes the JSON report. Returns `Ok` when
 * every case passed and `SuiteFailures` when the suite completed with
 * failing cases (the report is written either way).
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be a valid pointer.
 */
enum ConfrayStatus confray_run_suite(const char *suite,
                                     uint64_t seed,
                                     uint64_t count,
                                     const char *alpha,
                                     const char *mode,
                                     char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CONFRAY_H */
