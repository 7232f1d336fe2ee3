/* C interface for the toric gamma_2 classification library. */

#ifndef TORIC_GAMMA2_H
#define TORIC_GAMMA2_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every C entry point.
 */
typedef enum Tg2Status {
  TG2_STATUS_OK = 0,
  TG2_STATUS_NULL_ARGUMENT = 1,
  TG2_STATUS_INVALID_INPUT = 2,
  TG2_STATUS_NOT_FANO = 3,
  TG2_STATUS_NOT_COMPLETE = 4,
  TG2_STATUS_NOT_SIMPLICIAL = 5,
  TG2_STATUS_INDEX_OUT_OF_RANGE = 6,
  TG2_STATUS_BUFFER_TOO_SMALL = 7,
  TG2_STATUS_INTERNAL_ERROR = 8,
} Tg2Status;

/**
 * Sign class of gamma_2 over the torus invariant surfaces.
 */
typedef enum Tg2Verdict {
  TG2_VERDICT_POSITIVE = 0,
  TG2_VERDICT_NEF_NOT_POSITIVE = 1,
  TG2_VERDICT_NOT_NEF = 2,
} Tg2Verdict;

/**
 * Opaque handle to a classified variety.
 */
typedef struct Tg2Variety Tg2Variety;

/**
 * Variety property flags; `terminal` and `gorenstein` are only meaningful
 * when `fano` is set.
 */
typedef struct Tg2Profile {
  bool q_factorial;
  bool complete;
  bool fano;
  bool terminal;
  bool gorenstein;
  int64_t picard;
} Tg2Profile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Classify the variety spanned by `n_points` lattice points of dimension
 * `dim` (2 or 3), stored row-major in `coords` (`n_points * dim` entries).
 * On success writes a fresh handle to `out`; free it with
 * `tg2_variety_free`.
 *
 * # Safety
 * `coords` must point to `n_points * dim` readable `int64_t`s and `out`
 * to a writable pointer slot.
 */
enum Tg2Status tg2_variety_new(const int64_t *coords,
                               size_t n_points,
                               size_t dim,
                               struct Tg2Variety **out);

/**
 * # Safety
 * `v` must be a handle from `tg2_variety_new` not yet freed, or null.
 */
void tg2_variety_free(struct Tg2Variety *v);

/**
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum Tg2Status tg2_variety_profile(const struct Tg2Variety *v, struct Tg2Profile *out);

/**
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum Tg2Status tg2_variety_verdict(const struct Tg2Variety *v, enum Tg2Verdict *out);

/**
 * Number of torus invariant surfaces in the report: one per ray for a
 * 3-fold, one for a surface.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum Tg2Status tg2_variety_surface_count(const struct Tg2Variety *v, size_t *out);

/**
 * Picard number of the `index`-th surface.
 *
 * # Safety
 * `v` must be a live handle; `out` must be writable.
 */
enum Tg2Status tg2_variety_surface_rho(const struct Tg2Variety *v, size_t index, int64_t *out);

/**
 * Exact `gamma_2 . S` of the `index`-th surface as a NUL-terminated
 * fraction string (for example `"5/6"` or `"-2"`). Writes at most
 * `buf_len` bytes including the terminator; `written` (optional) receives
 * the full string length without the terminator.
 *
 * # Safety
 * `v` must be a live handle; `buf` must point to `buf_len` writable bytes.
 */
enum Tg2Status tg2_variety_surface_gamma2(const struct Tg2Variety *v,
                                          size_t index,
                                          char *buf,
                                          size_t buf_len,
                                          size_t *written);

/**
 * Full JSON report (same schema as the CLI). Returns a fresh string to be
 * released with `tg2_string_free`, or null on null input.
 *
 * # Safety
 * `v` must be a live handle or null.
 */
char *tg2_variety_report_json(const struct Tg2Variety *v);

/**
 * # Safety
 * `s` must be a string returned by this library, not yet freed, or null.
 */
void tg2_string_free(char *s);

/**
 * Description of the most recent error on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *tg2_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_GAMMA2_H */
