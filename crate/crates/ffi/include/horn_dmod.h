#ifndef HORN_DMOD_H
#define HORN_DMOD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum HdmStatus {
  /**
   * The check passed or the value was computed.
   */
  HDM_STATUS_OK = 0,
  /**
   * The check ran and came out negative.
   */
  HDM_STATUS_NEGATIVE = 1,
  /**
   * A resource limit was hit or the check does not apply.
   */
  HDM_STATUS_INCONCLUSIVE = 2,
  /**
   * The input was rejected.
   */
  HDM_STATUS_INPUT_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  HDM_STATUS_NULL_POINTER = 4,
  /**
   * A string argument was not valid UTF-8.
   */
  HDM_STATUS_INVALID_UTF8 = 5,
  /**
   * An internal panic was caught at the boundary.
   */
  HDM_STATUS_PANIC = 6,
} HdmStatus;

/**
 * Analyses available through [`hdm_run`].
 */
typedef enum HdmAction {
  HDM_ACTION_VALIDATE = 0,
  HDM_ACTION_CONSTRUCT = 1,
  HDM_ACTION_RANK = 2,
  HDM_ACTION_HOLONOMIC = 3,
  HDM_ACTION_REGULAR = 4,
  HDM_ACTION_BFUNCTION_CERT = 5,
  HDM_ACTION_BFUNCTION_CERT_DEEP = 6,
  HDM_ACTION_RESTRICT = 7,
  HDM_ACTION_VERIFY_RESTRICTION = 8,
  HDM_ACTION_CHECK_HOLONOMICITY_TRANSFER = 9,
  HDM_ACTION_CHECK_CORRESPONDENCE = 10,
  HDM_ACTION_REPORT = 11,
} HdmAction;

/**
 * Which system `Rank` and `Holonomic` look at.
 */
typedef enum HdmSystemKind {
  /**
   * Use the `"system"` key of the input, or the lattice system if absent.
   */
  HDM_SYSTEM_KIND_DEFAULT = 0,
  HDM_SYSTEM_KIND_LATTICE = 1,
  HDM_SYSTEM_KIND_HORN = 2,
  HDM_SYSTEM_KIND_NHORN = 3,
} HdmSystemKind;

/**
 * Opaque handle to a validated `(B, kappa)` pair.
 */
typedef struct HdmSystem HdmSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a JSON input document of the form
 * `{"B": [[...], ...], "kappa": ["p/q", ...], "system": "horn"}`.
 *
 * On success `*out` receives a handle to release with [`hdm_system_free`].
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HdmStatus hdm_system_from_json(const char *json, struct HdmSystem **out);

/**
 * Releases a handle. Null is accepted.
 *
 * # Safety
 * `sys` must come from [`hdm_system_from_json`] and not be used afterwards.
 */
void hdm_system_free(struct HdmSystem *sys);

/**
 * Number of rows of `B` (the number of lattice variables), or 0 for null.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t hdm_system_rows(const struct HdmSystem *sys);

/**
 * Number of columns of `B` (the number of Horn variables), or 0 for null.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t hdm_system_cols(const struct HdmSystem *sys);

/**
 * Runs one analysis. `budget == 0` selects the default Gröbner budget and
 * `trunc == 0` the default series truncation.
 *
 * The JSON result is written to `*out_json` for every status except
 * `NullPointer` and `Panic`; for errors it has the form
 * `{"error": kind, "message": text}`.
 *
 * # Safety
 * `sys` must be a live handle and `out_json` a valid pointer.
 */
enum HdmStatus hdm_run(const struct HdmSystem *sys,
                       enum HdmAction action,
                       enum HdmSystemKind kind,
                       size_t budget,
                       uint32_t trunc,
                       char **out_json);

/**
 * Holonomicity of the selected system with default settings.
 *
 * # Safety
 * As for [`hdm_run`].
 */
enum HdmStatus hdm_holonomic(const struct HdmSystem *sys, enum HdmSystemKind kind, char **out_json);

/**
 * Holonomic rank of the selected system with default settings.
 *
 * # Safety
 * As for [`hdm_run`].
 */
enum HdmStatus hdm_rank(const struct HdmSystem *sys, enum HdmSystemKind kind, char **out_json);

/**
 * Row-sum regularity check.
 *
 * # Safety
 * As for [`hdm_run`].
 */
enum HdmStatus hdm_regular(const struct HdmSystem *sys, char **out_json);

/**
 * Compares the restriction of the lattice module with the normalized Horn module.
 *
 * # Safety
 * As for [`hdm_run`].
 */
enum HdmStatus hdm_verify_restriction(const struct HdmSystem *sys, size_t budget, char **out_json);

/**
 * Full report. Always `Ok` unless an argument is invalid; individual
 * sections carry their own errors.
 *
 * # Safety
 * As for [`hdm_run`].
 */
enum HdmStatus hdm_report(const struct HdmSystem *sys, size_t budget, char **out_json);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call on the same thread.
 */
const char *hdm_last_error(void);

/**
 * Releases a string returned by this library. Null is accepted.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void hdm_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hdm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HORN_DMOD_H */
