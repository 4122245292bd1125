#ifndef WARPCHECK_H
#define WARPCHECK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Monotone quantity selector.
 */
typedef enum wc_quantity {
  WC_QUANTITY_PLUS = 0,
  WC_QUANTITY_MINUS = 1,
  WC_QUANTITY_MW = 2,
} wc_quantity;

/**
 * Status codes returned by every fallible function.
 */
typedef enum wc_status {
  /**
   * Success.
   */
  WC_OK = 0,
  /**
   * A pointer argument was null.
   */
  WC_NULL_POINTER = 1,
  /**
   * Arguments were invalid (bad name, parameter, or evaluation point).
   */
  WC_INVALID_ARGUMENT = 2,
  /**
   * A numerical computation failed (blow-up, non-convergence, pole).
   */
  WC_NUMERIC_ERROR = 3,
} wc_status;

/**
 * Opaque handle to a radial harmonic function on a metric.
 */
typedef struct wc_harmonic wc_harmonic;

/**
 * Opaque handle to a catalog metric.
 */
typedef struct wc_metric wc_metric;

/**
 * Pointwise curvature data of a metric.
 */
typedef struct wc_curvature_point {
  double t;
  double k_rad;
  double k_tan;
  double ric_11;
  double ric_aa;
  double sc;
} wc_curvature_point;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message on this thread into `buf` (truncated to
 * `len - 1` bytes, always NUL-terminated). Returns the full message length.
 */
uintptr_t wc_last_error_message(char *buf, uintptr_t len);

/**
 * Create a catalog metric by name with `n_params` key/value parameters.
 */
enum wc_status wc_metric_create(const char *name,
                                const char *const *param_keys,
                                const double *param_values,
                                uintptr_t n_params,
                                struct wc_metric **out);

void wc_metric_free(struct wc_metric *m);

/**
 * Evaluation domain of the metric.
 */
enum wc_status wc_metric_domain(const struct wc_metric *m, double *lo, double *hi);

/**
 * Closed-form curvature at an interior point.
 */
enum wc_status wc_metric_curvature(const struct wc_metric *m,
                                   double t,
                                   struct wc_curvature_point *out);

/**
 * Finite-difference curvature oracle at an interior point.
 */
enum wc_status wc_metric_curvature_oracle(const struct wc_metric *m,
                                          double t,
                                          double step,
                                          struct wc_curvature_point *out);

/**
 * Create the canonical radial harmonic of a catalog metric.
 */
enum wc_status wc_harmonic_create(const struct wc_metric *m, struct wc_harmonic **out);

void wc_harmonic_free(struct wc_harmonic *h);

/**
 * Value G(t) of the harmonic.
 */
enum wc_status wc_harmonic_value(const struct wc_harmonic *h, double t, double *out);

/**
 * |grad G| at t.
 */
enum wc_status wc_harmonic_grad_norm(const struct wc_harmonic *h, double t, double *out);

/**
 * Level energy w(t) = area * |grad G|^2 at coordinate t.
 */
enum wc_status wc_harmonic_w(const struct wc_harmonic *h, double t, double *out);

/**
 * Evaluate a monotone quantity on an automatic n-point level grid and
 * return the largest derivative estimate (<= 0 up to tolerance means the
 * quantity is non-increasing).
 */
enum wc_status wc_monotone_max_derivative(const struct wc_harmonic *h,
                                          enum wc_quantity quantity,
                                          uintptr_t n_points,
                                          double *out);

/**
 * Residual of the Riccati equation for the closed-form family member h_c.
 */
enum wc_status wc_riccati_residual(double c, double r, double *out);

/**
 * Generate a metric from the w-solution family on its default domain and
 * validate scalar-flatness; writes max |Sc| of both curvature paths.
 */
enum wc_status wc_generate_validate(double c_family,
                                    double k,
                                    double c0,
                                    uintptr_t n_points,
                                    double *max_sc_closed,
                                    double *max_sc_oracle);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WARPCHECK_H */
