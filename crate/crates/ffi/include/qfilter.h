#ifndef QFILTER_H
#define QFILTER_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QfBell {
  QF_BELL_PHI_PLUS = 0,
  QF_BELL_PHI_MINUS = 1,
  QF_BELL_PSI_PLUS = 2,
  QF_BELL_PSI_MINUS = 3,
} QfBell;

typedef enum QfNoise {
  QF_NOISE_BIT_FLIP = 0,
  QF_NOISE_PHASE_FLIP = 1,
} QfNoise;

typedef enum QfStatus {
  QF_STATUS_OK = 0,
  QF_STATUS_NULL_POINTER = 1,
  QF_STATUS_INVALID_ARGUMENT = 2,
  // The filters annihilated the state.
  QF_STATUS_BLOCKED = 3,
  // Non-physical input or a numerical failure.
  QF_STATUS_NUMERICAL = 4,
  QF_STATUS_BUFFER_TOO_SMALL = 5,
  QF_STATUS_PANIC = 6,
} QfStatus;

typedef enum QfStrategy {
  QF_STRATEGY_NONE = 0,
  QF_STRATEGY_MATCH = 1,
  QF_STRATEGY_OPTIMAL = 2,
} QfStrategy;

// Opaque two-qubit (or single-qubit) density matrix.
typedef struct QfState QfState;

typedef struct QfSweepPoint {
  double gamma_a;
  double gamma_b;
  double mutual_info_bits;
  double concurrence;
  double transmission;
} QfSweepPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
// The pointer stays valid until the next call on the same thread.
const char *qf_last_error_message(void);

// One of the four Bell states.
//
// # Safety
// `out` must be valid for writes.
enum QfStatus qf_state_new_bell(enum QfBell label, struct QfState **out);

// `phi+` after bit-flip or phase-flip noise of weight `p` on qubit A.
//
// # Safety
// `out` must be valid for writes.
enum QfStatus qf_state_new_pauli_noise(enum QfNoise noise, double p, struct QfState **out);

// Builds a state from `2 * dim * dim` doubles, row-major, interleaved
// `(re, im)`. `dim` must be 2 or 4. The matrix is validated.
//
// # Safety
// `entries` must point to `2 * dim * dim` readable doubles; `out` must be
// valid for writes.
enum QfStatus qf_state_from_matrix(size_t dim, const double *entries, struct QfState **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `state` must come from this library and not be used afterwards.
void qf_state_free(struct QfState *state);

// # Safety
// `state` must be a live handle; `out` must be valid for writes.
enum QfStatus qf_state_dim(const struct QfState *state, size_t *out);

// Copies the matrix into `buf` in the layout of `qf_state_from_matrix`.
//
// # Safety
// `buf` must be writable for `len` doubles.
enum QfStatus qf_state_get_matrix(const struct QfState *state, double *buf, size_t len);

// Quantum mutual information in bits.
//
// # Safety
// `state` must be a live handle; `out` must be valid for writes.
enum QfStatus qf_state_mutual_information(const struct QfState *state, double *out);

// # Safety
// `state` must be a live handle; `out` must be valid for writes.
enum QfStatus qf_state_concurrence(const struct QfState *state, double *out);

// Applies filters of strength `gamma_a`, `gamma_b` along the unit 3-vectors
// `axis_a`, `axis_b`. Writes a new handle and the transmission probability.
//
// # Safety
// `axis_a` and `axis_b` must point to 3 doubles; outputs must be writable.
enum QfStatus qf_apply_filters(const struct QfState *state,
                               double gamma_a,
                               const double *axis_a,
                               double gamma_b,
                               const double *axis_b,
                               struct QfState **out_state,
                               double *out_transmission);

// Best qubit-B filter for a channel filter of strength `gamma_a` along the
// unit vector `axis_a`. Writes the magnitude and the orientation (3 doubles).
//
// # Safety
// `axis_a` must point to 3 doubles; `out_orientation` must be writable for 3.
enum QfStatus qf_optimal_filter(const struct QfState *state,
                                double gamma_a,
                                const double *axis_a,
                                double *out_magnitude,
                                double *out_orientation);

// Sweeps `n` channel filter strengths from `grid`, writing `n` points.
//
// # Safety
// `grid` must hold `n` doubles and `out` room for `n` points.
enum QfStatus qf_sweep(enum QfNoise noise,
                       double p,
                       const double *grid,
                       size_t n,
                       enum QfStrategy strategy,
                       double normalization,
                       struct QfSweepPoint *out);

// Library version, a static NUL-terminated string.
const char *qf_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QFILTER_H */
