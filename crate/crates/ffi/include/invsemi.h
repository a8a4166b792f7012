#ifndef INVSEMI_H
#define INVSEMI_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum InvsemiStatus {
  INVSEMI_STATUS_OK = 0,
  INVSEMI_STATUS_NULL_POINTER = 1,
  INVSEMI_STATUS_MALFORMED = 2,
  INVSEMI_STATUS_NOT_INVERSE = 3,
  INVSEMI_STATUS_OUT_OF_RANGE = 4,
  INVSEMI_STATUS_TOO_LARGE = 5,
  INVSEMI_STATUS_INVALID = 6,
  /**
   * The call ran but a checked statement failed.
   */
  INVSEMI_STATUS_FAILED = 7,
  INVSEMI_STATUS_PANIC = 8,
} InvsemiStatus;

/**
 * A validated finite inverse semigroup.
 */
typedef struct InvsemiSemigroup InvsemiSemigroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or NULL. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *invsemi_last_error(void);

/**
 * Builds a semigroup from a row-major `order × order` table.
 *
 * # Safety
 * `table` must point to `order * order` readable values and `out` must be
 * writable.
 */
enum InvsemiStatus invsemi_semigroup_from_table(const uint32_t *table,
                                                size_t order,
                                                struct InvsemiSemigroup **out);

/**
 * Builds a semigroup from instance JSON: a table object or a list of
 * partial bijections.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` must be writable.
 */
enum InvsemiStatus invsemi_semigroup_from_json(const char *json, struct InvsemiSemigroup **out);

/**
 * A built-in fixture by name (`"b2"`, `"i2"`, `"chain3"`, …).
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` must be writable.
 */
enum InvsemiStatus invsemi_semigroup_fixture(const char *name, struct InvsemiSemigroup **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a handle returned by this library, not yet freed.
 */
void invsemi_semigroup_free(struct InvsemiSemigroup *s);

/**
 * Number of elements; 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
size_t invsemi_semigroup_order(const struct InvsemiSemigroup *s);

/**
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum InvsemiStatus invsemi_semigroup_mul(const struct InvsemiSemigroup *s,
                                         size_t a,
                                         size_t b,
                                         size_t *out);

/**
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum InvsemiStatus invsemi_semigroup_inverse(const struct InvsemiSemigroup *s,
                                             size_t a,
                                             size_t *out);

/**
 * The instance JSON of `s`, with inverses and idempotents.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum InvsemiStatus invsemi_semigroup_to_json(const struct InvsemiSemigroup *s, char **out);

/**
 * Number of congruences of `s`.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum InvsemiStatus invsemi_congruence_count(const struct InvsemiSemigroup *s, size_t *out);

/**
 * Class labels of the `index`-th congruence in sorted order, written to
 * `labels[0..order]`.
 *
 * # Safety
 * `s` must be a live handle and `labels` must have room for `order`
 * values.
 */
enum InvsemiStatus invsemi_congruence_labels(const struct InvsemiSemigroup *s,
                                             size_t index,
                                             size_t *labels);

/**
 * `|Ω(S)|`, the order of the translational hull.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum InvsemiStatus invsemi_hull_order(const struct InvsemiSemigroup *s, size_t *out);

/**
 * `K ⋊^λ T` for the action given row-major as `act[t * |K| + a] = t·a`.
 *
 * # Safety
 * `k` and `t` must be live handles, `act` must hold `|T| * |K|` values and
 * `out` must be writable.
 */
enum InvsemiStatus invsemi_lsd(const struct InvsemiSemigroup *k,
                               const struct InvsemiSemigroup *t,
                               const uint32_t *act,
                               struct InvsemiSemigroup **out);

/**
 * The full restricted semidirect product for an action and `ε: K → E(T)`.
 * Returns `FAILED` when (AFR) does not hold.
 *
 * # Safety
 * As for [`invsemi_lsd`], and `eps` must hold `|K|` values.
 */
enum InvsemiStatus invsemi_rsd(const struct InvsemiSemigroup *k,
                               const struct InvsemiSemigroup *t,
                               const uint32_t *act,
                               const uint32_t *eps,
                               struct InvsemiSemigroup **out);

/**
 * Searches for a (split) almost Billhardt transversal of `(S, θ)` with
 * `θ` given by class labels. On success writes the certificate JSON;
 * returns `FAILED` when none exists.
 *
 * # Safety
 * `s` must be a live handle, `labels` must hold `order` values and `out`
 * must be writable.
 */
enum InvsemiStatus invsemi_billhardt_find(const struct InvsemiSemigroup *s,
                                          const size_t *labels,
                                          bool split,
                                          char **out);

/**
 * Runs a verifier suite (`"thm-3.10"`, `"all"`, …) and writes the JSON
 * report. Returns `OK` when every check passes and `FAILED` otherwise; the
 * report is written in both cases.
 *
 * # Safety
 * `suite` must be a NUL-terminated string and `out` must be writable.
 */
enum InvsemiStatus invsemi_verify(const char *suite, size_t max_order, uint64_t seed, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void invsemi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVSEMI_H */
