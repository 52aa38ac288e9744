#ifndef THOMPSON_H
#define THOMPSON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ThompsonStatus {
  THOMPSON_STATUS_OK = 0,
  THOMPSON_STATUS_NULL_POINTER = 1,
  THOMPSON_STATUS_INVALID_UTF8 = 2,
  THOMPSON_STATUS_PARSE = 3,
  THOMPSON_STATUS_DOMAIN = 4,
  THOMPSON_STATUS_NOT_IN_WREATH_SUBGROUP = 5,
  THOMPSON_STATUS_CAP_EXCEEDED = 6,
  THOMPSON_STATUS_PANIC = 7,
} ThompsonStatus;

// Opaque handle to a piecewise-linear map.
typedef struct ThompsonMap ThompsonMap;

// Opaque handle to an element of Z wr Z.
typedef struct ThompsonWreath ThompsonWreath;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *thompson_last_error(void);

// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void thompson_string_free(char *s);

// Map of a word such as `"x1 x0^-1 a^2 b"`.
//
// # Safety
// `word` must be a NUL-terminated string; `out` must be writable.
enum ThompsonStatus thompson_map_from_word(const char *word, struct ThompsonMap **out);

// Map from its `x:y x:y ...` breakpoint list.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum ThompsonStatus thompson_map_parse(const char *src, struct ThompsonMap **out);

// # Safety
// `m` must be null or a handle from this library, not yet freed.
void thompson_map_free(struct ThompsonMap *m);

// `f` then `g`.
//
// # Safety
// `f`, `g` must be live handles; `out` must be writable.
enum ThompsonStatus thompson_map_compose(const struct ThompsonMap *f,
                                         const struct ThompsonMap *g,
                                         struct ThompsonMap **out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_map_inverse(const struct ThompsonMap *f, struct ThompsonMap **out);

// # Safety
// `f`, `g` must be live handles; `out` must be writable.
enum ThompsonStatus thompson_map_equal(const struct ThompsonMap *f,
                                       const struct ThompsonMap *g,
                                       bool *out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_map_is_identity(const struct ThompsonMap *f, bool *out);

// Image of the dyadic `x` (`"3/8"`, `"3/2^3"`, `"1"`), returned as text.
//
// # Safety
// `f` must be a live handle, `x` a NUL-terminated string, `out` writable.
enum ThompsonStatus thompson_map_evaluate(const struct ThompsonMap *f, const char *x, char **out);

// Support as text, e.g. `"(1/2, 7/8)"`.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_map_support(const struct ThompsonMap *f, char **out);

// Exponents of the slopes at the two ends of the domain.
//
// # Safety
// `f` must be a live handle; `left` and `right` must be writable.
enum ThompsonStatus thompson_map_abelianize(const struct ThompsonMap *f,
                                            int64_t *left,
                                            int64_t *right);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_map_to_string(const struct ThompsonMap *f, char **out);

// # Safety
// `f` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_map_to_json(const struct ThompsonMap *f, char **out);

// Element from `"shift=m; coeffs={k:v, ...}"`.
//
// # Safety
// `src` must be a NUL-terminated string; `out` must be writable.
enum ThompsonStatus thompson_wreath_parse(const char *src, struct ThompsonWreath **out);

// # Safety
// `w` must be null or a handle from this library, not yet freed.
void thompson_wreath_free(struct ThompsonWreath *w);

// # Safety
// `w` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_wreath_embed(const struct ThompsonWreath *w, struct ThompsonMap **out);

// Returns `NotInWreathSubgroup` when `f` is not in the image of the embedding.
//
// # Safety
// `f` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_wreath_decompose(const struct ThompsonMap *f,
                                              struct ThompsonWreath **out);

// # Safety
// `w` must be a live handle; `out` must be writable.
enum ThompsonStatus thompson_wreath_to_string(const struct ThompsonWreath *w, char **out);

// Runs one check: `"lemma1"` and `"claim"` take Kmax, `"relations"` takes
// Nmax, `"centralizer"` takes the ball radius. `out_json` may be null.
//
// # Safety
// `check` must be a NUL-terminated string; `pass` must be writable.
enum ThompsonStatus thompson_verify(const char *check, uint32_t param, bool *pass, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THOMPSON_H */
