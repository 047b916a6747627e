#ifndef TRACEGEO_H
#define TRACEGEO_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER = 1,
  TG_STATUS_INVALID_UTF8 = 2,
  TG_STATUS_PARSE = 3,
  TG_STATUS_DOMAIN = 4,
  TG_STATUS_RESOURCE = 5,
  TG_STATUS_NUMERIC = 6,
  TG_STATUS_DIAGNOSTICS = 7,
  TG_STATUS_IO = 8,
  TG_STATUS_PANIC = 9,
} TgStatus;

// Method selector for [`tg_k`].
typedef enum TgKMethod {
  // Rational datum if present, otherwise the pair enumeration.
  TG_K_METHOD_DEFAULT = 0,
  TG_K_METHOD_PAIRS = 1,
  TG_K_METHOD_RICHARDSON = 2,
  TG_K_METHOD_MIN_ORBIT = 3,
} TgKMethod;

// Opaque parsed group specification.
typedef struct TgGroup TgGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the
// next call into the library on the same thread; do not free.
const char *tg_last_error_message(void);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tg_string_free(char *s);

// Parse a group specification such as `"A2xA1+T1@res=2"`.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum TgStatus tg_group_parse(const char *text, struct TgGroup **out);

// Release a group. Null is ignored.
//
// # Safety
// `g` must come from [`tg_group_parse`] and not have been freed.
void tg_group_free(struct TgGroup *g);

// `k(G)` as a double and, if `out_text` is non-null, as an exact `"n/d"`
// string to be freed with [`tg_string_free`].
//
// # Safety
// `g` must be a live group; `out` writable; `out_text` null or writable.
enum TgStatus tg_k(const struct TgGroup *g, enum TgKMethod method, double *out, char **out_text);

// All parabolic subsets of the group as JSON (same shape as the CLI).
//
// # Safety
// `g` must be a live group; `out` writable.
enum TgStatus tg_parabolics_json(const struct TgGroup *g, char **out);

// Nilpotent orbits of `gl<n>` or a classical simple type (`"C3"`) as JSON.
//
// # Safety
// `ty` must be a nul-terminated string; `out` writable.
enum TgStatus tg_orbits_json(const char *ty, char **out);

// `|SL(n, Z/N)|` as a decimal string.
//
// # Safety
// `out` must be writable.
enum TgStatus tg_sl_index(uint32_t n, uint64_t level, char **out);

// Discriminant of an `n x n` matrix given row-major as `"num/den"` strings.
// Writes the exact value as a string and its archimedean absolute value.
//
// # Safety
// `entries` must hold `n * n` nul-terminated strings; outputs writable.
enum TgStatus tg_discriminant(const char *const *entries,
                              size_t n,
                              char **out_value,
                              double *out_abs);

// Finite part for `t^power e^{-lambda t}`; `power` is a rational string,
// `t0 <= 0` keeps the default split point.
//
// # Safety
// `power` must be a nul-terminated string; `out` writable.
enum TgStatus tg_mellin_fp_exp(double lambda,
                               const char *power,
                               uint32_t order,
                               double t0,
                               double *out);

// Largest admissible beta.
//
// # Safety
// `out` must be writable.
enum TgStatus tg_beta_max(double c2, double c4, double cn, double k, double *out);

// Smallest admissible lambda.
//
// # Safety
// `out` must be writable.
enum TgStatus tg_lambda_min(double k, double beta, double epsilon, double c_prime, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRACEGEO_H */
