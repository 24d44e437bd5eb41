#ifndef MATSIGN_H
#define MATSIGN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MsStatus {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_INVALID_ARGUMENT = 2,
  MS_STATUS_DIMENSION_MISMATCH = 3,
  MS_STATUS_SINGULAR = 4,
  MS_STATUS_SINGULAR_POINT = 5,
  MS_STATUS_NON_CONVERGENCE = 6,
  MS_STATUS_DOMAIN_ERROR = 7,
  MS_STATUS_IO_ERROR = 8,
  MS_STATUS_PANIC = 9,
} MsStatus;

/**
 * Opaque dense matrix.
 */
typedef struct MsMatrix MsMatrix;

/**
 * Opaque generated test model with known eigenstructure.
 */
typedef struct MsModel MsModel;

/**
 * Flat copy of a bound report.
 */
typedef struct MsBoundReport {
  size_t n;
  double kappa2_x;
  double e1_bound;
  double e2_bound;
  double total_bound;
  double c_nxl;
  double gamma_n;
  double gamma_3n;
  double gamma_m;
  double rho_hat;
  size_t m_points;
  double lambda_frob;
  double spectral_sum_e1;
  double spectral_sum_e2;
  bool assumption_ok;
  bool saturated;
} MsBoundReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next `ms_` call on the same thread.
 */
const char *ms_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *ms_version(void);

/**
 * Creates a `rows`×`cols` matrix from `rows*cols` row-major values, or
 * zeros when `data` is null.
 *
 * # Safety
 * `data` must be null or point to `rows*cols` readable doubles; `out` must
 * be a valid pointer.
 */
enum MsStatus ms_matrix_new(size_t rows, size_t cols, const double *data, struct MsMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void ms_matrix_free(struct MsMatrix *m);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
size_t ms_matrix_rows(const struct MsMatrix *m);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
size_t ms_matrix_cols(const struct MsMatrix *m);

/**
 * Copies the entries, row-major, into `out`, which holds `len` doubles.
 *
 * # Safety
 * `m` must be a live handle and `out` must point to `len` writable doubles.
 */
enum MsStatus ms_matrix_copy_data(const struct MsMatrix *m, double *out, size_t len);

/**
 * sign(A) by the double-exponential rule with `2*n_points+1` points and
 * step `ln(8*d_const*n_points)/n_points`. `residual` receives
 * `‖S²−I‖_F` when not null.
 *
 * # Safety
 * `a` must be a live handle, `out` a valid pointer, `residual` null or valid.
 */
enum MsStatus ms_sign_de(const struct MsMatrix *a,
                         size_t n_points,
                         double d_const,
                         size_t threads,
                         struct MsMatrix **out,
                         double *residual);

/**
 * sign(A) by the Newton iteration `X ← (X + X⁻¹)/2`.
 *
 * # Safety
 * `a` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_sign_newton(const struct MsMatrix *a,
                             double tol,
                             size_t max_iter,
                             struct MsMatrix **out);

/**
 * `‖S²−I‖_F`.
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_involution_residual(const struct MsMatrix *s, double *out);

/**
 * Random model `A = XΛX⁻¹` with `κ₂(X) = kappa_x` and `κ₂(Λ) = kappa_lambda`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MsStatus ms_model_build(size_t n,
                             double kappa_x,
                             double kappa_lambda,
                             uint64_t seed,
                             struct MsModel **out);

/**
 * # Safety
 * `m` must be null or a handle from this library not yet freed.
 */
void ms_model_free(struct MsModel *m);

/**
 * # Safety
 * `m` must be null or a live handle.
 */
size_t ms_model_n(const struct MsModel *m);

/**
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_model_assemble(const struct MsModel *m, struct MsMatrix **out);

/**
 * `X·sign(Λ)·X⁻¹`.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_model_reference_sign(const struct MsModel *m, struct MsMatrix **out);

/**
 * Error bounds for a model, with growth factor `rho_hat` and `m_points`
 * summation gaps.
 *
 * # Safety
 * `m` must be a live handle and `out` a valid pointer.
 */
enum MsStatus ms_bound_report(const struct MsModel *m,
                              double rho_hat,
                              size_t m_points,
                              struct MsBoundReport *out);

/**
 * `γ_m = m·u/(1 − m·u)`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MsStatus ms_gamma(size_t m, double *out);

/**
 * Complete elliptic integral of the first kind.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MsStatus ms_elliptic_k(double k, double *out);

/**
 * Solve-error bound for `n` eigenvalues `re[j] + i·im[j]`; `im` may be
 * null for a real spectrum.
 *
 * # Safety
 * `re` (and `im` when not null) must point to `n` doubles; `out` must be valid.
 */
enum MsStatus ms_e1_bound(size_t n,
                          double kappa2_x,
                          double rho_hat,
                          const double *re,
                          const double *im,
                          double *out);

/**
 * Summation-error bound; arguments as for [`ms_e1_bound`].
 *
 * # Safety
 * `re` (and `im` when not null) must point to `n` doubles; `out` must be valid.
 */
enum MsStatus ms_e2_bound(size_t n,
                          double kappa2_x,
                          size_t m_points,
                          const double *re,
                          const double *im,
                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATSIGN_H */
