#ifndef COMMBOUND_H
#define COMMBOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CbFunction {
  CB_FUNCTION_TRIANGLE = 0,
  CB_FUNCTION_BUMP = 1,
} CbFunction;

typedef enum CbStatus {
  CB_STATUS_OK = 0,
  CB_STATUS_INVALID_ARGUMENT = 1,
  CB_STATUS_NULL_POINTER = 2,
  CB_STATUS_NUMERICAL = 3,
  // A validation run found a sample above its bound.
  CB_STATUS_VIOLATION = 4,
  CB_STATUS_PANIC = 5,
} CbStatus;

// Opaque bound curve. Create with a `cb_curve_*` constructor, release with [`cb_curve_free`].
typedef struct CbCurve CbCurve;

// One piece of a curve's lower envelope: `slope·δ + intercept` on `[delta_start, delta_end]`.
typedef struct CbSegment {
  double delta_start;
  double delta_end;
  double slope;
  double intercept;
} CbSegment;

typedef struct CbComplex {
  double re;
  double im;
} CbComplex;

// Message for the last failed call on this thread, or NULL after a successful one.
// The pointer stays valid until the next `cb_*` call on the same thread.
const char *cb_last_error_message(void);

// The √-bound γ₀ built from Pedersen lines `1..=n_max` and `a_grid` tangent points.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum CbStatus cb_curve_gamma0(size_t n_max, size_t a_grid, struct CbCurve **out);

// Envelope of the Pedersen lines `1..=n_max` alone.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum CbStatus cb_curve_pedersen(size_t n_max, struct CbCurve **out);

// Truncation envelope for a builtin function on the circle, degrees `1..=n_max`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum CbStatus cb_curve_truncation(enum CbFunction function, size_t n_max, struct CbCurve **out);

// Releases a curve. NULL is ignored.
//
// # Safety
// `curve` must come from a `cb_curve_*` constructor and not have been freed.
void cb_curve_free(struct CbCurve *curve);

// Curve value at `delta`; queries above the curve's range are clamped to it.
//
// # Safety
// `curve` must be a live handle and `out` writable.
enum CbStatus cb_curve_eval(const struct CbCurve *curve, double delta, double *out);

// Largest δ the curve covers.
//
// # Safety
// `curve` must be a live handle and `out` writable.
enum CbStatus cb_curve_delta_max(const struct CbCurve *curve, double *out);

// # Safety
// `curve` must be a live handle and `out` writable.
enum CbStatus cb_curve_segment_count(const struct CbCurve *curve, size_t *out);

// Segment `index` of the stored envelope, in increasing δ.
//
// # Safety
// `curve` must be a live handle and `out` writable.
enum CbStatus cb_curve_segment(const struct CbCurve *curve, size_t index, struct CbSegment *out);

// Constructive lower bound for a builtin at `delta`; `grid_size` 0 selects the default.
//
// # Safety
// `out` must be writable.
enum CbStatus cb_eta_lower(enum CbFunction function, double delta, size_t grid_size, double *out);

// Taylor coefficient `c_n` of `1 − √(1 − x)`, `n >= 1`.
//
// # Safety
// `out` must be writable.
enum CbStatus cb_sqrt_coefficient(size_t n, double *out);

// Operator norm of a row-major `dim × dim` complex matrix.
//
// # Safety
// `entries` must hold `dim * dim` values and `out` must be writable.
enum CbStatus cb_op_norm(size_t dim, const struct CbComplex *entries, double *out);

// `‖AB − BA‖` for row-major `dim × dim` matrices.
//
// # Safety
// `a` and `b` must each hold `dim * dim` values and `out` must be writable.
enum CbStatus cb_commutator_norm(size_t dim,
                                 const struct CbComplex *a,
                                 const struct CbComplex *b,
                                 double *out);

// Checks `samples` random (H, A) pairs against the default γ₀, alternating uniform
// and atomic spectra. Writes the smallest margin `bound − measured`; on a
// violation returns [`CbStatus::Violation`] and writes the offending margin.
//
// # Safety
// `min_margin` must be writable.
enum CbStatus cb_validate_sqrt(uint64_t samples,
                               size_t dim_min,
                               size_t dim_max,
                               uint64_t seed,
                               double *min_margin);

#endif  /* COMMBOUND_H */
