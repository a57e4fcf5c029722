#ifndef MORAN_SPECTRAL_H
#define MORAN_SPECTRAL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MoranStatus {
  MORAN_STATUS_OK = 0,
  MORAN_STATUS_NULL_POINTER = 1,
  MORAN_STATUS_INVALID_ARGUMENT = 2,
  MORAN_STATUS_GUARD_FAILED = 3,
  MORAN_STATUS_OUT_OF_RANGE = 4,
  MORAN_STATUS_BUFFER_TOO_SMALL = 5,
  MORAN_STATUS_PANIC = 6,
} MoranStatus;

typedef enum MoranVerdict {
  MORAN_VERDICT_SPECTRAL = 0,
  MORAN_VERDICT_NOT_SPECTRAL = 1,
  MORAN_VERDICT_UNKNOWN = 3,
} MoranVerdict;

// Opaque parameter sequences.
typedef struct MoranParams MoranParams;

// Opaque finite spectrum.
typedef struct MoranSpectrum MoranSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates parameter sequences from prefix and period arrays.
//
// # Safety
// Each non-empty array pointer must be valid for its length; `out` must be writable.
enum MoranStatus moran_params_new(const uint64_t *b_prefix,
                                  uintptr_t b_prefix_len,
                                  const uint64_t *b_period,
                                  uintptr_t b_period_len,
                                  const uint64_t *p_prefix,
                                  uintptr_t p_prefix_len,
                                  const uint64_t *p_period,
                                  uintptr_t p_period_len,
                                  struct MoranParams **out);

// # Safety
// `p` must come from [`moran_params_new`] and not be freed twice.
void moran_params_free(struct MoranParams *p);

// # Safety
// `params` must be a live handle and `out` writable.
enum MoranStatus moran_decide(const struct MoranParams *params, enum MoranVerdict *out);

// Writes the NUL-terminated TOML report into `buf`. `needed` receives the
// size including the terminator, also when `buf` is too small.
//
// # Safety
// `buf` must be valid for `cap` bytes (or null with `cap == 0`).
enum MoranStatus moran_decide_report(const struct MoranParams *params,
                                     char *buf,
                                     uintptr_t cap,
                                     uintptr_t *needed);

// `s_k` for `p_k ≡ 1`.
//
// # Safety
// `params` must be a live handle and `out` writable.
enum MoranStatus moran_bernoulli_s(const struct MoranParams *params, uintptr_t k, int64_t *out);

// Truncated `μ̂(t)` and its error bound.
//
// # Safety
// `params` must be a live handle; output pointers writable.
enum MoranStatus moran_mu_hat(const struct MoranParams *params,
                              double t,
                              uintptr_t truncation,
                              double *re,
                              double *im,
                              double *bound);

// Truncated `ν̂(t)` and its error bound.
//
// # Safety
// `params` must be a live handle; output pointers writable.
enum MoranStatus moran_nu_hat(const struct MoranParams *params,
                              double t,
                              uintptr_t truncation,
                              double *re,
                              double *im,
                              double *bound);

// Spectrum of the first `levels` rearranged factors.
//
// # Safety
// `params` must be a live handle and `out` writable.
enum MoranStatus moran_spectrum_build(const struct MoranParams *params,
                                      uintptr_t levels,
                                      struct MoranSpectrum **out);

// # Safety
// `s` must come from [`moran_spectrum_build`] and not be freed twice.
void moran_spectrum_free(struct MoranSpectrum *s);

// Number of points, or 0 for a null handle.
//
// # Safety
// `s` must be null or a live handle.
uintptr_t moran_spectrum_len(const struct MoranSpectrum *s);

// The `i`-th point (ascending) as `num / den`.
//
// # Safety
// `s` must be a live handle; output pointers writable.
enum MoranStatus moran_spectrum_point(const struct MoranSpectrum *s,
                                      uintptr_t i,
                                      int64_t *num,
                                      int64_t *den);

// `Q(t)` of the spectrum against the exact convolution of the first `levels`
// rearranged factors.
//
// # Safety
// Handles must be live and `out` writable.
enum MoranStatus moran_q_convolution(const struct MoranSpectrum *s,
                                     const struct MoranParams *params,
                                     uintptr_t levels,
                                     double t,
                                     double *out);

// Copies the calling thread's last error message into `buf`.
//
// # Safety
// `buf` must be valid for `cap` bytes (or null with `cap == 0`).
enum MoranStatus moran_last_error(char *buf, uintptr_t cap, uintptr_t *needed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MORAN_SPECTRAL_H */
