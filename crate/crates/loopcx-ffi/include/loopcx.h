#ifndef LOOPCX_H
#define LOOPCX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LoopcxStatus {
  LOOPCX_STATUS_OK = 0,
  LOOPCX_STATUS_NULL_POINTER = 1,
  LOOPCX_STATUS_INVALID_UTF8 = 2,
  LOOPCX_STATUS_PARSE = 3,
  LOOPCX_STATUS_OUT_OF_RANGE = 4,
  LOOPCX_STATUS_BUFFER_TOO_SMALL = 5,
  LOOPCX_STATUS_INTERNAL = 6,
} LoopcxStatus;

/**
 * Opaque handle owning a parsed complex and its tree collapse.
 */
typedef struct LoopcxComplex LoopcxComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failing call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *loopcx_last_error(void);

/**
 * Parse a complex from its JSON document. On success `*out` owns a handle
 * that must be released with `loopcx_complex_free`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LoopcxStatus loopcx_complex_parse(const char *json, struct LoopcxComplex **out);

/**
 * # Safety
 * `c` must come from `loopcx_complex_parse` and not be freed twice; null is ignored.
 */
void loopcx_complex_free(struct LoopcxComplex *c);

/**
 * # Safety
 * `c` must be a live handle and `dim` writable.
 */
enum LoopcxStatus loopcx_complex_dim(const struct LoopcxComplex *c, size_t *dim);

/**
 * H_degree as Z^rank ⊕ ⊕ Z/t_i. At most `capacity` torsion coefficients are
 * written to `torsion`; `*n_torsion` always receives the full count.
 *
 * # Safety
 * `c` must be a live handle, `rank` and `n_torsion` writable, and `torsion`
 * valid for `capacity` writes (it may be null when `capacity` is 0).
 */
enum LoopcxStatus loopcx_homology(const struct LoopcxComplex *c,
                                  size_t degree,
                                  size_t *rank,
                                  int64_t *torsion,
                                  size_t capacity,
                                  size_t *n_torsion);

/**
 * ∂² on every cobar word of weight ≤ `max_weight`, under the resolved conventions.
 * `*failures` counts words with ∂² ≠ 0 or a weight-raising boundary.
 *
 * # Safety
 * `c` must be a live handle, `checked` and `failures` writable.
 */
enum LoopcxStatus loopcx_cobar_d_squared(const struct LoopcxComplex *c,
                                         size_t max_weight,
                                         uint64_t *checked,
                                         uint64_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOOPCX_H */
