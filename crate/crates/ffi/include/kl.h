/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef KL_H
#define KL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum KlStatus {
  KL_STATUS_OK = 0,
  KL_STATUS_NULL_POINTER = 1,
  KL_STATUS_PARSE = 2,
  KL_STATUS_SIZE_MISMATCH = 3,
  KL_STATUS_NOT_BELOW = 4,
  KL_STATUS_BUDGET_EXCEEDED = 5,
  KL_STATUS_INVARIANT = 6,
  KL_STATUS_UNRESOLVED = 7,
  KL_STATUS_INTERNAL = 8,
  KL_STATUS_PANIC = 9,
} KlStatus;

// A permutation.
typedef struct KlPerm KlPerm;

// A Laurent polynomial with rational coefficients.
typedef struct KlPoly KlPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into the library on the same thread.
const char *kl_last_error(void);

// Library version, a static string.
const char *kl_version(void);

// # Safety
// `s` must be null or come from this library.
void kl_string_free(char *s);

// Parses one-line notation such as `"31524"` or `"3,1,5,2,4"`.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum KlStatus kl_perm_parse(const char *text, struct KlPerm **out);

// # Safety
// `p` must be null or a handle from this library, released at most once.
void kl_perm_free(struct KlPerm *p);

// Size `n`, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t kl_perm_size(const struct KlPerm *p);

// Coxeter length, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t kl_perm_length(const struct KlPerm *p);

// One-line notation; free with `kl_string_free`. Null for a null handle.
//
// # Safety
// `p` must be null or a live handle.
char *kl_perm_to_string(const struct KlPerm *p);

// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_bruhat_leq(const struct KlPerm *v, const struct KlPerm *w, bool *out);

// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_v_max(const struct KlPerm *v, const struct KlPerm *w, struct KlPerm **out);

// Multiplicity of `X_w` at `e_v`; `Unresolved` when no route applies.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_multiplicity(const struct KlPerm *v, const struct KlPerm *w, uint64_t *out);

// Whether `I_{v,w}` is homogeneous in the standard grading.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_is_homogeneous(const struct KlPerm *v, const struct KlPerm *w, bool *out);

// Buchberger's criterion for the essential minors of `I_{v,w}`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_groebner_verify(const struct KlPerm *v,
                                 const struct KlPerm *w,
                                 uint64_t budget,
                                 bool *out);

// Number of pipe dreams on `D(v)` with Demazure product `target`.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_pipe_count(const struct KlPerm *v,
                            const struct KlPerm *target,
                            bool reduced_only,
                            size_t *out);

// # Safety
// `w` must be live; `out` must be writable.
enum KlStatus kl_double_schubert(const struct KlPerm *w, struct KlPoly **out);

// # Safety
// `w` must be live; `out` must be writable.
enum KlStatus kl_double_grothendieck(const struct KlPerm *w, struct KlPoly **out);

// Kostant–Kumar K-polynomial of the pair.
//
// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_kostant_kumar(const struct KlPerm *v, const struct KlPerm *w, struct KlPoly **out);

// # Safety
// Handles must be live; `out` must be writable.
enum KlStatus kl_unspecialized_grothendieck(const struct KlPerm *v,
                                            const struct KlPerm *w,
                                            struct KlPoly **out);

// Parses a polynomial such as `"(x1-y2)(x2-y1) + 3*z11"`.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum KlStatus kl_poly_parse(const char *text, struct KlPoly **out);

// # Safety
// `p` must be null or a handle from this library, released at most once.
void kl_poly_free(struct KlPoly *p);

// Expanded form; free with `kl_string_free`. Null for a null handle.
//
// # Safety
// `p` must be null or a live handle.
char *kl_poly_to_string(const struct KlPoly *p);

// Number of terms, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t kl_poly_num_terms(const struct KlPoly *p);

// Exact equality; false if either handle is null.
//
// # Safety
// Handles must be null or live.
bool kl_poly_equal(const struct KlPoly *a, const struct KlPoly *b);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KL_H */
