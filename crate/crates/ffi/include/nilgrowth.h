#ifndef NILGROWTH_H
#define NILGROWTH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum NgStatus {
  NG_STATUS_OK = 0,
  NG_STATUS_NULL_POINTER = 1,
  NG_STATUS_INVALID_INPUT = 2,
  NG_STATUS_BUDGET = 3,
  NG_STATUS_NON_CONVERGENCE = 4,
  NG_STATUS_UNSUPPORTED = 5,
  NG_STATUS_NOT_FOUND = 6,
  NG_STATUS_PANIC = 7,
} NgStatus;

typedef struct NgGens NgGens;

typedef struct NgGroup NgGroup;

typedef struct NgShape NgShape;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *ng_last_error_message(void);

/**
 * Group from a preset name (`H3`, `H5`, `H3xZ`, `Z2`) or the text format.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
enum NgStatus ng_group_new(const char *spec, struct NgGroup **out);

/**
 * # Safety
 * `g` must come from `ng_group_new` and not be used afterwards.
 */
void ng_group_free(struct NgGroup *g);

/**
 * Generating set: the standard one when `text` is null, otherwise one
 * element per line.
 *
 * # Safety
 * `group` must be a live handle, `text` null or nul-terminated.
 */
enum NgStatus ng_gens_new(const struct NgGroup *group, const char *text, struct NgGens **out);

/**
 * # Safety
 * `s` must come from `ng_gens_new` and not be used afterwards.
 */
void ng_gens_free(struct NgGens *s);

/**
 * Writes `|B(0)|, ..., |B(nmax)|` into `out`, which holds `nmax + 1` values.
 *
 * # Safety
 * `gens` must be live and `out` must have room for `nmax + 1` values.
 */
enum NgStatus ng_ball_sizes(const struct NgGens *gens, size_t nmax, uint64_t *out);

/**
 * Word length of the element with the given `m + c` coordinates, searched
 * up to `cap`; `NotFound` beyond.
 *
 * # Safety
 * `coords` must point to `len` values.
 */
enum NgStatus ng_word_length(const struct NgGens *gens,
                             const int64_t *coords,
                             size_t len,
                             size_t cap,
                             size_t *out);

/**
 * Limit shape of a generating set.
 *
 * # Safety
 * `gens` must be live and `out` valid.
 */
enum NgStatus ng_shape_new(const struct NgGens *gens, struct NgShape **out);

/**
 * # Safety
 * `s` must come from `ng_shape_new` and not be used afterwards.
 */
void ng_shape_free(struct NgShape *s);

/**
 * Limit distance to a point in exponential coordinates.
 *
 * # Safety
 * `coords` must point to `len` values.
 */
enum NgStatus ng_cc_distance(const struct NgShape *shape,
                             const double *coords,
                             size_t len,
                             double *out);

/**
 * Exact volume of a planar limit shape as a newly allocated `p/q` string,
 * released with `ng_string_free`.
 *
 * # Safety
 * `shape` must be live and `out` valid.
 */
enum NgStatus ng_shape_volume(const struct NgShape *shape, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void ng_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NILGROWTH_H */
