#ifndef BTQUOT_H
#define BTQUOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BtqStatus {
  BTQ_STATUS_OK = 0,
  BTQ_STATUS_NULL_POINTER = 1,
  BTQ_STATUS_INVALID_INPUT = 2,
  BTQ_STATUS_BUDGET_EXCEEDED = 3,
  BTQ_STATUS_VERIFICATION_FAILED = 4,
  BTQ_STATUS_INTERNAL = 5,
} BtqStatus;

/**
 * A Weierstrass cubic over a finite field with its Laurent embedding.
 */
typedef struct BtqCurve BtqCurve;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread. Valid until the
 * next call into the library from the same thread.
 */
const char *btq_last_error(void);

/**
 * Static description of a status code.
 */
const char *btq_status_message(enum BtqStatus status);

/**
 * Creates a curve from a field spec (`"5"`, `"2^2"`) and coefficients
 * `"a1,a2,a3,a4,a6"`.
 *
 * # Safety
 * `field` and `coeffs` must be NUL-terminated strings; `out` must be
 * writable.
 */
enum BtqStatus btq_curve_new(const char *field, const char *coeffs, struct BtqCurve **out);

/**
 * # Safety
 * `curve` must come from `btq_curve_new` and not be used afterwards.
 */
void btq_curve_free(struct BtqCurve *curve);

/**
 * Number of rational points, including the point at infinity.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_curve_point_count(const struct BtqCurve *curve, uint64_t *out);

/**
 * Whether the curve has no rational singular point.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_curve_is_smooth(const struct BtqCurve *curve, bool *out);

/**
 * Fiber case table as JSON.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_classify_json(const struct BtqCurve *curve, char **out);

/**
 * The fundamental domain truncated at `depth`, as JSON.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_domain_json(const struct BtqCurve *curve, uint32_t depth, char **out);

/**
 * The fundamental domain truncated at `depth`, in Graphviz DOT.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_domain_dot(const struct BtqCurve *curve, uint32_t depth, char **out);

/**
 * Degree-one homology summands as JSON.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_homology_json(const struct BtqCurve *curve, char **out);

/**
 * Certificate ledger as JSON. Returns `BTQ_STATUS_VERIFICATION_FAILED`
 * (with the ledger still written to `out`) when some entry fails.
 *
 * # Safety
 * `curve` must be a live handle and `out` writable.
 */
enum BtqStatus btq_certify_json(const struct BtqCurve *curve, uint64_t budget, char **out);

/**
 * Order of the abelianization of `PGL2(F_q)`; needs `q >= 4`.
 *
 * # Safety
 * `field` must be a NUL-terminated string and `out` writable.
 */
enum BtqStatus btq_h1_pgl2(const char *field, uint64_t *out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void btq_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BTQUOT_H */
