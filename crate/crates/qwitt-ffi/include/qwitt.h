#ifndef QWITT_H
#define QWITT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum QwittStatus {
  QwittStatus_Ok = 0,
  QwittStatus_NullPointer = 1,
  QwittStatus_InvalidUtf8 = 2,
  /**
   * Malformed ring spec, vector text or configuration.
   */
  QwittStatus_Invalid = 3,
  /**
   * Arithmetic precondition failed, e.g. an index not dividing the level.
   */
  QwittStatus_Math = 4,
  /**
   * An exact division left a remainder.
   */
  QwittStatus_Inexact = 5,
  QwittStatus_Panic = 6,
} QwittStatus;

/**
 * The outcome of a verification run.
 */
typedef struct QwittReport QwittReport;

/**
 * A coefficient ring such as `z`, `zmod:4` or `poly:z:T`.
 */
typedef struct QwittRing QwittRing;

/**
 * An element of `W_m(R)`, tied to the ring it was created over.
 */
typedef struct QwittVector QwittVector;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message for the last failed call on this thread. Valid until the next failure.
 */
const char *qwitt_last_error(void);

/**
 * Library version as a static string.
 */
const char *qwitt_version(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void qwitt_string_free(char *s);

/**
 * Parses a ring spec.
 *
 * # Safety
 * `spec` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QwittStatus qwitt_ring_parse(const char *spec, struct QwittRing **out);

/**
 * # Safety
 * `ring` must be NULL or a handle from [`qwitt_ring_parse`] not yet freed.
 */
void qwitt_ring_free(struct QwittRing *ring);

/**
 * Parses `(c_1, .., c_m)` as an element of `W_m(ring)`.
 *
 * # Safety
 * `ring` must be a live handle, `coords` a NUL-terminated string and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_parse(const struct QwittRing *ring,
                                    uint64_t m,
                                    const char *coords,
                                    struct QwittVector **out);

/**
 * # Safety
 * `v` must be NULL or a vector handle not yet freed.
 */
void qwitt_vector_free(struct QwittVector *v);

/**
 * Truncation level of a vector.
 *
 * # Safety
 * `v` must be a live handle and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_level(const struct QwittVector *v, uint64_t *out);

/**
 * Text form `(c_1, .., c_m)`; free with [`qwitt_string_free`].
 *
 * # Safety
 * `v` must be a live handle and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_to_string(const struct QwittVector *v, char **out);

/**
 * Witt sum.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_add(const struct QwittVector *a,
                                  const struct QwittVector *b,
                                  struct QwittVector **out);

/**
 * Witt product.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_mul(const struct QwittVector *a,
                                  const struct QwittVector *b,
                                  struct QwittVector **out);

/**
 * `F_k : W_m -> W_{m/k}`.
 *
 * # Safety
 * `v` must be a live handle and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_frobenius(const struct QwittVector *v,
                                        uint64_t k,
                                        struct QwittVector **out);

/**
 * `V_k : W_m -> W_{km}`.
 *
 * # Safety
 * `v` must be a live handle and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_verschiebung(const struct QwittVector *v,
                                           uint64_t k,
                                           struct QwittVector **out);

/**
 * Ghost component `gh_n` for `n | m`, as text; free with [`qwitt_string_free`].
 *
 * # Safety
 * `v` must be a live handle and `out` a valid pointer.
 */
enum QwittStatus qwitt_vector_ghost(const struct QwittVector *v, uint64_t n, char **out);

/**
 * Runs verification suites described by a JSON configuration (same keys as the CLI's
 * `--config` file).
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QwittStatus qwitt_verify(const char *config_json, struct QwittReport **out);

/**
 * # Safety
 * `r` must be NULL or a report handle not yet freed.
 */
void qwitt_report_free(struct QwittReport *r);

/**
 * Counts of passed, failed and inconclusive checks. Any out-pointer may be NULL.
 *
 * # Safety
 * `r` must be a live handle; non-NULL out-pointers must be valid.
 */
enum QwittStatus qwitt_report_counts(const struct QwittReport *r,
                                     uintptr_t *pass,
                                     uintptr_t *fail,
                                     uintptr_t *inconclusive);

/**
 * The report as JSON; free with [`qwitt_string_free`].
 *
 * # Safety
 * `r` must be a live handle and `out` a valid pointer.
 */
enum QwittStatus qwitt_report_json(const struct QwittReport *r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QWITT_H */
