#ifndef TRITOP_H
#define TRITOP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

#define TRITOP_OK 0

#define TRITOP_ERR_PANIC_OR_NULL 1

#define TRITOP_ERR_VALIDATION 2

#define TRITOP_ERR_SINGULAR 3

#define TRITOP_ERR_CONVERGENCE 4

#define TRITOP_ERR_IO 5

/**
 * Inversion method selector for the C API.
 */
typedef enum TritopMethod {
  /**
   * Quadratic-time recurrence with compensated accumulation.
   */
  TritopMethod_Naive = 0,
  /**
   * Newton doubling over fast convolution.
   */
  TritopMethod_Newton = 1,
  /**
   * Naive for n <= 4096, Newton above.
   */
  TritopMethod_Auto = 2,
} TritopMethod;

/**
 * Opaque inversion result: the symbol prefix `a`, its inverse `b`, and
 * the prefix sums `u`, all of length `n`.
 */
typedef struct TritopSeries TritopSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Returns the error message of the most recent failure on this thread.
 * Never null; empty string when no error has occurred.
 */
const char *tritop_last_error(void);

/**
 * Invert the triangular Toeplitz symbol given by `a[0..len]` to order `n`.
 *
 * # Safety
 * `a` must point to `len` readable doubles and `out` to a writable
 * pointer slot. On success `*out` owns a new handle.
 */
int32_t tritop_invert(const double *a,
                      uintptr_t len,
                      uintptr_t n,
                      enum TritopMethod method,
                      struct TritopSeries **out);

/**
 * Invert the power-law symbol a_k = (1+k)^(-alpha) to order `n`.
 *
 * # Safety
 * `out` must point to a writable pointer slot.
 */
int32_t tritop_invert_power_law(double alpha,
                                uintptr_t n,
                                enum TritopMethod method,
                                struct TritopSeries **out);

/**
 * Number of entries in each of the three stored sequences.
 *
 * # Safety
 * `h` must be a live handle from an invert call.
 */
uintptr_t tritop_series_len(const struct TritopSeries *h);

/**
 * Sampled max deviation of conv(a, u) from the all-ones sequence.
 *
 * # Safety
 * `h` must be a live handle; returns NaN for null.
 */
double tritop_series_au_residual(const struct TritopSeries *h);

/**
 * Copy the symbol prefix `a` (zero-padded to n) into `dst[0..cap]`.
 *
 * # Safety
 * `h` live handle; `dst` writable for `cap` doubles, cap >= len.
 */
int32_t tritop_series_a(const struct TritopSeries *h, double *dst, uintptr_t cap);

/**
 * Copy the inverse sequence `b` into `dst[0..cap]`.
 *
 * # Safety
 * `h` live handle; `dst` writable for `cap` doubles, cap >= len.
 */
int32_t tritop_series_b(const struct TritopSeries *h, double *dst, uintptr_t cap);

/**
 * Copy the prefix-sum sequence `u` into `dst[0..cap]`.
 *
 * # Safety
 * `h` live handle; `dst` writable for `cap` doubles, cap >= len.
 */
int32_t tritop_series_u(const struct TritopSeries *h, double *dst, uintptr_t cap);

/**
 * Release a handle. Null is a no-op; double-free is undefined behavior.
 *
 * # Safety
 * `h` must be null or a handle not freed before.
 */
void tritop_series_free(struct TritopSeries *h);

/**
 * Fit the log-log decay slope of `values[0..len]` over the default tail
 * window; writes the fitted rate to `*out_rate`.
 *
 * # Safety
 * `values` readable for `len` doubles; `out_rate` writable.
 */
int32_t tritop_decay_rate(const double *values, uintptr_t len, double *out_rate);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRITOP_H */
