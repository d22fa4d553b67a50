#ifndef COLDEPTH_H
#define COLDEPTH_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ColdepthStatus {
  COLDEPTH_STATUS_OK = 0,
  /**
   * An invariant or bound check failed.
   */
  COLDEPTH_STATUS_VIOLATION = 1,
  /**
   * Malformed JSON, wrong shape or out-of-range argument.
   */
  COLDEPTH_STATUS_INVALID_INPUT = 2,
  /**
   * Well-formed input that the operation cannot accept.
   */
  COLDEPTH_STATUS_PRECONDITION = 3,
  COLDEPTH_STATUS_NULL_POINTER = 4,
  /**
   * A bug: the library panicked. The handle arguments stay valid.
   */
  COLDEPTH_STATUS_PANIC = 5,
} ColdepthStatus;

/**
 * Opaque configuration handle.
 */
typedef struct ColdepthConfig ColdepthConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next library call on the same thread.
 */
const char *coldepth_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void coldepth_string_free(char *s);

/**
 * `⌊(d+2)²/4⌋`.
 */
size_t coldepth_theorem_bound(size_t d);

/**
 * Parses a configuration document into a new handle.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a writable slot.
 */
enum ColdepthStatus coldepth_config_parse(const char *json, struct ColdepthConfig **out);

/**
 * A seeded random configuration in general position.
 *
 * # Safety
 * `out` must be a writable slot.
 */
enum ColdepthStatus coldepth_config_random(size_t d, uint64_t seed, struct ColdepthConfig **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `cfg` must be null or a handle from this library not yet freed.
 */
void coldepth_config_free(struct ColdepthConfig *cfg);

/**
 * Ambient dimension, or 0 for a null handle.
 *
 * # Safety
 * `cfg` must be null or a live handle.
 */
size_t coldepth_config_dim(const struct ColdepthConfig *cfg);

/**
 * The configuration as a JSON document.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable slot.
 */
enum ColdepthStatus coldepth_config_to_json(const struct ColdepthConfig *cfg, char **out);

/**
 * Number of colourful simplices containing the origin.
 *
 * # Safety
 * `cfg` must be a live handle; `depth` a writable slot.
 */
enum ColdepthStatus coldepth_depth(const struct ColdepthConfig *cfg, size_t *depth);

/**
 * Depth report with one witness per containing simplex, as JSON.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable slot.
 */
enum ColdepthStatus coldepth_depth_json(const struct ColdepthConfig *cfg, char **out);

/**
 * Staged witness simplices with their stage log, as JSON.
 *
 * # Safety
 * `cfg` must be a live handle; `out` a writable slot.
 */
enum ColdepthStatus coldepth_witnesses_json(const struct ColdepthConfig *cfg,
                                            uint64_t seed,
                                            char **out);

/**
 * Re-checks a witness set document against the configuration.
 *
 * # Safety
 * `cfg` must be a live handle, `json` a NUL-terminated string and `ok` a
 * writable slot.
 */
enum ColdepthStatus coldepth_verify_witnesses(const struct ColdepthConfig *cfg,
                                              const char *json,
                                              bool *ok);

/**
 * Coverage certificate for a pairs document, as JSON.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` a writable slot.
 */
enum ColdepthStatus coldepth_cross_check_json(const char *json, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLDEPTH_H */
