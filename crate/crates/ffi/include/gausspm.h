#ifndef GAUSSPM_H
#define GAUSSPM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum GpmStatus {
  GPM_STATUS_OK = 0,
  GPM_STATUS_NULL_POINTER = 1,
  GPM_STATUS_INVALID_STATE = 2,
  GPM_STATUS_INVALID_MODE_VECTOR = 3,
  GPM_STATUS_ANNIHILATING_SUBTRACTION = 4,
  GPM_STATUS_DOMAIN = 5,
  GPM_STATUS_NOT_POSITIVE_DEFINITE = 6,
  GPM_STATUS_DEGREE_OVERFLOW = 7,
  GPM_STATUS_STEP_UNDERFLOW = 8,
  GPM_STATUS_NON_CONVERGENCE = 9,
  GPM_STATUS_PANIC = 10,
} GpmStatus;

/**
 * Photon operation applied to the mother state.
 */
typedef enum GpmSign {
  GPM_SIGN_ADD = 1,
  GPM_SIGN_SUBTRACT = -1,
} GpmSign;

/**
 * Opaque Gaussian state handle.
 */
typedef struct GpmGaussianState GpmGaussianState;

/**
 * Opaque photon-added or photon-subtracted state handle.
 */
typedef struct GpmPhotonState GpmPhotonState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null if the last call succeeded.
 * The pointer stays valid until the next library call on the same thread.
 */
const char *gpm_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *gpm_version(void);

/**
 * Creates an `n`-mode Gaussian state from a row-major `2n×2n` covariance `v` and a
 * length-`2n` displacement `d`, ordered `(x1, p1, x2, p2, ...)`, with vacuum `V = I`.
 *
 * # Safety
 * `v` must point to `4n²` doubles, `d` to `2n` doubles, and `out` must be writable.
 */
enum GpmStatus gpm_gaussian_new(size_t n,
                                const double *v,
                                const double *d,
                                struct GpmGaussianState **out);

/**
 * Creates `n` identical squeezed thermal modes with thermal parameter `q` and squeezing `r`.
 *
 * # Safety
 * `out` must be writable.
 */
enum GpmStatus gpm_gaussian_sqth(double q, double r, size_t n, struct GpmGaussianState **out);

/**
 * Releases a Gaussian state. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle from `gpm_gaussian_new`/`gpm_gaussian_sqth` not yet freed.
 */
void gpm_gaussian_free(struct GpmGaussianState *state);

/**
 * Number of modes of a Gaussian state, or 0 for null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t gpm_gaussian_modes(const struct GpmGaussianState *state);

/**
 * Quadrature coherence scale `C²` of a Gaussian state.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum GpmStatus gpm_gaussian_qcs(const struct GpmGaussianState *state, double *out);

/**
 * Applies `a†(c)` (`sign = GPM_SIGN_ADD`) or `a(c)` (`sign = GPM_SIGN_SUBTRACT`) to a copy
 * of `mother`.
 * `c_re`/`c_im` hold the `n` components of the mode vector, which is normalized here.
 *
 * # Safety
 * `mother` must be a live handle, `c_re`/`c_im` must point to `n` doubles where `n` is the
 * number of modes, and `out` must be writable.
 */
enum GpmStatus gpm_photon_new(const struct GpmGaussianState *mother,
                              int32_t sign,
                              const double *c_re,
                              const double *c_im,
                              struct GpmPhotonState **out);

/**
 * Releases a photon-tuned state. Null is ignored.
 *
 * # Safety
 * `state` must be null or a handle from `gpm_photon_new` not yet freed.
 */
void gpm_photon_free(struct GpmPhotonState *state);

/**
 * Characteristic function `χ(z)` at the `n` complex amplitudes `(z_re[k], z_im[k])`.
 *
 * # Safety
 * `state` must be a live handle, `z_re`/`z_im` must point to `n` doubles, and
 * `out_re`/`out_im` must be writable.
 */
enum GpmStatus gpm_photon_char(const struct GpmPhotonState *state,
                               const double *z_re,
                               const double *z_im,
                               double *out_re,
                               double *out_im);

/**
 * Wigner function at the phase-space point `r = (x1, p1, ...)` of length `2n`.
 *
 * # Safety
 * `state` must be a live handle, `r` must point to `2n` doubles, and `out` must be writable.
 */
enum GpmStatus gpm_photon_wigner(const struct GpmPhotonState *state, const double *r, double *out);

/**
 * Quadrature coherence scale `C²` of a photon-tuned state.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum GpmStatus gpm_photon_qcs(const struct GpmPhotonState *state, double *out);

/**
 * Wigner negative volume. One mode uses deterministic quadrature; two modes use seeded
 * quasi Monte Carlo. `out_error` receives the error estimate and may be null.
 *
 * # Safety
 * `state` must be a live handle, `out_volume` writable and `out_error` null or writable.
 */
enum GpmStatus gpm_photon_negative_volume(const struct GpmPhotonState *state,
                                          uint64_t seed,
                                          double *out_volume,
                                          double *out_error);

/**
 * Wigner-negativity verdict: 1 negative, 0 nonnegative, -1 undecided within tolerance.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum GpmStatus gpm_photon_wigner_negative(const struct GpmPhotonState *state, int32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAUSSPM_H */
