#ifndef SEMIFTVN_H
#define SEMIFTVN_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SemiftvnStatus {
  SEMIFTVN_STATUS_OK = 0,
  SEMIFTVN_STATUS_NULL_POINTER = 1,
  SEMIFTVN_STATUS_INVALID_UTF8 = 2,
  SEMIFTVN_STATUS_UNKNOWN_SYSTEM = 3,
  SEMIFTVN_STATUS_UNKNOWN_GENERATORS = 4,
  SEMIFTVN_STATUS_DIMENSION_MISMATCH = 5,
  SEMIFTVN_STATUS_BUFFER_TOO_SMALL = 6,
  SEMIFTVN_STATUS_PARSE_ERROR = 7,
  SEMIFTVN_STATUS_SCHEMA_ERROR = 8,
  SEMIFTVN_STATUS_INVALID_POLYNOMIAL = 9,
  SEMIFTVN_STATUS_NO_CONVERGENCE = 10,
  SEMIFTVN_STATUS_ROOT_COUNT_MISMATCH = 11,
  SEMIFTVN_STATUS_NOT_POSITIVE_DEFINITE = 12,
  SEMIFTVN_STATUS_ORBIT_UNAVAILABLE = 13,
  SEMIFTVN_STATUS_OTHER = 14,
  SEMIFTVN_STATUS_PANIC = 15,
} SemiftvnStatus;

/**
 * Opaque hyperbolic polynomial.
 */
typedef struct SemiftvnPolynomial SemiftvnPolynomial;

/**
 * Opaque semi-FTvN system.
 */
typedef struct SemiftvnSystem SemiftvnSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *semiftvn_last_error_message(void);

/**
 * Creates a system from a registry name such as `rn_sort:4` or `sym_eja:3`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SemiftvnStatus semiftvn_system_new(const char *name, struct SemiftvnSystem **out);

/**
 * # Safety
 * `sys` must come from [`semiftvn_system_new`] and not be used afterwards.
 */
void semiftvn_system_free(struct SemiftvnSystem *sys);

/**
 * Dimensions of the domain `V` and the range `W`.
 *
 * # Safety
 * `sys` must be a live handle; the output pointers must be valid.
 */
enum SemiftvnStatus semiftvn_system_dims(const struct SemiftvnSystem *sys,
                                         size_t *dim_v,
                                         size_t *dim_w);

/**
 * Writes `λ(x)` into `out`, which must hold at least `dim_w` values.
 *
 * # Safety
 * `x` must point to `len` values and `out` to `out_len` writable values.
 */
enum SemiftvnStatus semiftvn_lambda(const struct SemiftvnSystem *sys,
                                    const double *x,
                                    size_t len,
                                    double *out,
                                    size_t out_len);

/**
 * Strong commutativity of `x` and `y`: the gap `⟨λx,λy⟩ − ⟨x,y⟩` and
 * whether it is within tolerance.
 *
 * # Safety
 * `x` and `y` must point to `len` values; the output pointers must be valid.
 */
enum SemiftvnStatus semiftvn_strong_commute(const struct SemiftvnSystem *sys,
                                            const double *x,
                                            const double *y,
                                            size_t len,
                                            double tol,
                                            bool *commute,
                                            double *gap);

/**
 * Commutativity of `a` and `b` relative to a named generator set; a null
 * `generators` selects the system's automorphism generators.
 *
 * # Safety
 * `a` and `b` must point to `len` values; `generators` must be null or a
 * NUL-terminated string; the output pointers must be valid.
 */
enum SemiftvnStatus semiftvn_commute_rel(const struct SemiftvnSystem *sys,
                                         const char *generators,
                                         const double *a,
                                         const double *b,
                                         size_t len,
                                         double tol,
                                         bool *commute,
                                         double *residual);

/**
 * Runs the axiom and eigenvalue-map property checks and returns the
 * reports as a JSON array in `*json_out`.
 *
 * # Safety
 * `json_out` must be valid; the string must be released with
 * [`semiftvn_string_free`].
 */
enum SemiftvnStatus semiftvn_check_axioms(const struct SemiftvnSystem *sys,
                                          size_t samples,
                                          uint64_t seed,
                                          double tol,
                                          char **json_out);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void semiftvn_string_free(char *s);

/**
 * Parses a polynomial from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SemiftvnStatus semiftvn_polynomial_from_json(const char *json,
                                                  struct SemiftvnPolynomial **out);

/**
 * # Safety
 * `p` must come from [`semiftvn_polynomial_from_json`] and not be used
 * afterwards.
 */
void semiftvn_polynomial_free(struct SemiftvnPolynomial *p);

/**
 * Dimension and degree of a polynomial.
 *
 * # Safety
 * `p` must be a live handle; the output pointers must be valid.
 */
enum SemiftvnStatus semiftvn_polynomial_shape(const struct SemiftvnPolynomial *p,
                                              size_t *dim,
                                              size_t *degree);

/**
 * Writes the eigenvalues of `x` in decreasing order; `out` must hold
 * `degree` values.
 *
 * # Safety
 * `x` must point to `len` values and `out` to `out_len` writable values.
 */
enum SemiftvnStatus semiftvn_polynomial_eigmap(const struct SemiftvnPolynomial *p,
                                               const double *x,
                                               size_t len,
                                               double *out,
                                               size_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEMIFTVN_H */
