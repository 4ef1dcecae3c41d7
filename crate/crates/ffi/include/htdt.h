#ifndef HTDT_H
#define HTDT_H

#pragma once

#include <stdbool.h>
#include <stddef.h>

typedef enum HtdtStatus {
  HTDT_STATUS_OK = 0,
  HTDT_STATUS_NULL_POINTER = 1,
  HTDT_STATUS_INVALID_ARGUMENT = 2,
  HTDT_STATUS_DIMENSION_MISMATCH = 3,
  HTDT_STATUS_UNPHYSICAL = 4,
  HTDT_STATUS_NOT_COMPLETELY_POSITIVE = 5,
  HTDT_STATUS_NUMERICAL = 6,
  HTDT_STATUS_PANIC = 7,
} HtdtStatus;

// Opaque Gaussian state.
typedef struct HtdtState HtdtState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *htdt_last_error_message(void);

// Vacuum state on `modes` modes.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum HtdtStatus htdt_state_vacuum(size_t modes, struct HtdtState **out);

// State from `2 modes` first moments and a row-major `2 modes × 2 modes`
// covariance matrix.
//
// # Safety
// `mean` must point to `2 * modes` doubles, `cov` to `4 * modes * modes`
// doubles, and `out` to writable storage for a handle.
enum HtdtStatus htdt_state_new(size_t modes,
                               const double *mean,
                               const double *cov,
                               struct HtdtState **out);

// Two-mode resource state with covariance `[[a I, c σz], [c σz, b I]]`.
//
// # Safety
// `out` must be a valid pointer to writable storage for a handle.
enum HtdtStatus htdt_state_resource(double a, double b, double c, struct HtdtState **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `state` must be NULL or a handle from this library not yet freed.
void htdt_state_free(struct HtdtState *state);

// Number of modes, or 0 for NULL.
//
// # Safety
// `state` must be NULL or a live handle.
size_t htdt_state_modes(const struct HtdtState *state);

// Copies the first moments into `out` (`2 modes` doubles).
//
// # Safety
// `state` must be a live handle and `out` must hold `len` doubles.
enum HtdtStatus htdt_state_first_moments(const struct HtdtState *state, double *out, size_t len);

// Copies the covariance matrix row-major into `out` (`4 modes²` doubles).
//
// # Safety
// `state` must be a live handle and `out` must hold `len` doubles.
enum HtdtStatus htdt_state_covariance(const struct HtdtState *state, double *out, size_t len);

// Applies the phase-insensitive channel `(x, y)` to mode `mode` and returns
// the result as a new handle.
//
// # Safety
// `state` must be a live handle and `out` writable storage for a handle.
enum HtdtStatus htdt_state_apply_channel(const struct HtdtState *state,
                                         size_t mode,
                                         double x,
                                         double y,
                                         struct HtdtState **out);

// Logarithmic negativity of a two-mode state.
//
// # Safety
// `state` must be a live handle and `out` a valid pointer.
enum HtdtStatus htdt_state_log_negativity(const struct HtdtState *state, double *out);

// Added noise of the analog protocol.
//
// # Safety
// `out` must be a valid pointer.
enum HtdtStatus htdt_added_noise(double a,
                                 double b,
                                 double c,
                                 double x,
                                 double y,
                                 double g,
                                 double d,
                                 double *out);

// Teleportation noise `g a + b - 2 √g c`.
//
// # Safety
// `out` must be a valid pointer.
enum HtdtStatus htdt_noise_qt(double a, double b, double c, double g, double *out);

// Minimizes the added noise over `d ∈ [max{g/x, 1}, d_max]`.
//
// # Safety
// `out_d` and `out_noise` must be valid pointers.
enum HtdtStatus htdt_optimize_d(double a,
                                double b,
                                double c,
                                double x,
                                double y,
                                double g,
                                double d_max,
                                double *out_d,
                                double *out_noise);

// Codebook-averaged fidelity of the channel `(g, noise)`; `lambda = 0` is
// the uniform codebook.
//
// # Safety
// `out` must be a valid pointer.
enum HtdtStatus htdt_avg_fidelity(double g, double noise, double lambda, double *out);

// Optimized analog fidelity over the attenuator of transmissivity `x`.
//
// # Safety
// `out` must be a valid pointer.
enum HtdtStatus htdt_fidelity_an(double r, double x, double *out);

// Whether a finite encoding gain beats teleportation at log-negativity
// `2r` over the channel `(x, y)`.
//
// # Safety
// `out` must be a valid pointer.
enum HtdtStatus htdt_beats_teleportation(double r, double x, double y, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HTDT_H */
