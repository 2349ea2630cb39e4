#ifndef HSEM_H
#define HSEM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HsemStatus {
  HSEM_STATUS_OK = 0,
  HSEM_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the supported domain.
   */
  HSEM_STATUS_DOMAIN = 2,
  /**
   * Exponent on a pole of the requested quantity.
   */
  HSEM_STATUS_POLE = 3,
  /**
   * Order too high or too low, or the field is not smooth enough.
   */
  HSEM_STATUS_ORDER = 4,
  /**
   * A series that must converge does not, or failed to within its budget.
   */
  HSEM_STATUS_CONVERGENCE = 5,
  /**
   * The computation would exceed the lattice point cap.
   */
  HSEM_STATUS_TOO_LARGE = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  HSEM_STATUS_PANIC = 7,
} HsemStatus;

/**
 * Opaque operator handle.
 */
typedef struct HsemOperator HsemOperator;

/**
 * Pieces of one expansion evaluation.
 */
typedef struct HsemSumResult {
  double value;
  double operator_term;
  double hadamard_term;
  double error_bound;
} HsemSumResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL if none failed.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *hsem_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hsem_version(void);

/**
 * Epstein zeta Z_0(nu) of Z^2 with an absolute error bound.
 *
 * # Safety
 * `out_value` and `out_error` must be valid for writes; `out_error` may be NULL.
 */
enum HsemStatus hsem_epstein_z0(double nu, double *out_value, double *out_error);

/**
 * Moment sum C_n(nu) = sum' z1^{2n} / |z|^{nu+2n} over Z^2, continued in nu.
 *
 * # Safety
 * As for [`hsem_epstein_z0`].
 */
enum HsemStatus hsem_c_n(uint32_t n, double nu, double *out_value, double *out_error);

/**
 * Builds the expansion operator of the given order on the lattice h Z^2.
 *
 * # Safety
 * `out` must be valid for writes. The handle written there must be released
 * with [`hsem_operator_free`].
 */
enum HsemStatus hsem_operator_new(uint32_t order, double nu, double h, struct HsemOperator **out);

/**
 * Releases an operator. NULL is accepted and ignored.
 *
 * # Safety
 * `op` must come from [`hsem_operator_new`] and not have been freed.
 */
void hsem_operator_free(struct HsemOperator *op);

/**
 * Order of the operator, or 0 for NULL.
 *
 * # Safety
 * `op` must be NULL or a live handle.
 */
uint32_t hsem_operator_order(const struct HsemOperator *op);

/**
 * Coefficient of d1^{2p} d2^{2q}; Domain if p + q exceeds the order.
 *
 * # Safety
 * `op` must be a live handle and `out` valid for writes.
 */
enum HsemStatus hsem_operator_coeff(const struct HsemOperator *op,
                                    uint32_t p,
                                    uint32_t q,
                                    double *out);

/**
 * Applies the operator to amplitude * exp(-|y - c|^2 / width^2) at (x, y).
 *
 * # Safety
 * `op` must be a live handle and `out` valid for writes.
 */
enum HsemStatus hsem_operator_apply_gaussian(const struct HsemOperator *op,
                                             double width,
                                             double center_x,
                                             double center_y,
                                             double amplitude,
                                             double x,
                                             double y,
                                             double *out);

/**
 * Finite-part integral over u of exp(-|u|^2 / width^2) / |p - u|^nu, p = (x, y).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum HsemStatus hsem_hadamard_gaussian(double nu, double width, double x, double y, double *out);

/**
 * Expansion of sum'_{y in h Z^2} exp(-|y|^2 / width^2) / |y - h s|^nu at the
 * site s = (site_x, site_y), using the operator's nu, order and spacing.
 *
 * # Safety
 * `op` must be a live handle and `out` valid for writes.
 */
enum HsemStatus hsem_sum_gaussian(const struct HsemOperator *op,
                                  double width,
                                  int64_t site_x,
                                  int64_t site_y,
                                  struct HsemSumResult *out);

/**
 * Direct sum'_{y in Z^2} exp(-|y|^2 / width^2) / |y - s|^nu truncated where
 * the certified tail drops below `tol`.
 *
 * # Safety
 * `out_value` must be valid for writes; `out_tail_bound` may be NULL.
 */
enum HsemStatus hsem_brute_force_sum(double nu,
                                     double width,
                                     int64_t site_x,
                                     int64_t site_y,
                                     double tol,
                                     double *out_value,
                                     double *out_tail_bound);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSEM_H */
