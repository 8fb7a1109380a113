/* C interface for the corrdyn correspondence-dynamics library. */

#ifndef CORRDYN_H
#define CORRDYN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum CorrdynStatus {
  CORRDYN_STATUS_OK = 0,
  CORRDYN_STATUS_INVALID_ARGUMENT = 1,
  CORRDYN_STATUS_NULL_POINTER = 2,
  CORRDYN_STATUS_POLE_INPUT = 3,
  CORRDYN_STATUS_ROOT_FINDING_FAILURE = 4,
  CORRDYN_STATUS_NO_VALID_RADIUS = 5,
  CORRDYN_STATUS_SEED_NOT_REPELLING = 6,
  CORRDYN_STATUS_OUTSIDE_KLEIN_DISK = 7,
  CORRDYN_STATUS_BUFFER_TOO_SMALL = 8,
  CORRDYN_STATUS_IO_ERROR = 9,
  CORRDYN_STATUS_INTERNAL_ERROR = 99,
} CorrdynStatus;

/**
 * Orbit verdicts as stable integers.
 */
typedef enum CorrdynVerdict {
  CORRDYN_VERDICT_BOUNDED = 0,
  CORRDYN_VERDICT_ESCAPED = 1,
  CORRDYN_VERDICT_BUDGET_EXHAUSTED = 2,
} CorrdynVerdict;

/**
 * Fixed-point stability classes as stable integers.
 */
typedef enum CorrdynPointClass {
  CORRDYN_POINT_CLASS_ATTRACTING = 0,
  CORRDYN_POINT_CLASS_REPELLING = 1,
  CORRDYN_POINT_CLASS_PARABOLIC = 2,
  CORRDYN_POINT_CLASS_SUPERATTRACTING = 3,
} CorrdynPointClass;

/**
 * Opaque handle for the mating correspondence F_a.
 */
typedef struct CorrdynMating CorrdynMating;

/**
 * Opaque handle for the power correspondence (w-c)^q = z^p.
 */
typedef struct CorrdynPower CorrdynPower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a power correspondence handle. Requires p > q >= 1.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum CorrdynStatus corrdyn_power_new(uint32_t p,
                                     uint32_t q,
                                     double c_re,
                                     double c_im,
                                     struct CorrdynPower **out);

/**
 * Release a power correspondence handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `corrdyn_power_new` and not be freed twice.
 */
void corrdyn_power_free(struct CorrdynPower *handle);

/**
 * Forward branch images of z: up to q (value, derivative) pairs.
 * Derivatives of collapsed critical branches come out as NaN.
 *
 * # Safety
 * `handle` must be live; `values` (and `derivatives` if non-null) must hold
 * 2*capacity doubles; `out_len` one usize.
 */
enum CorrdynStatus corrdyn_power_forward(const struct CorrdynPower *handle,
                                         double z_re,
                                         double z_im,
                                         double *values,
                                         double *derivatives,
                                         size_t capacity,
                                         size_t *out_len);

/**
 * Backward branch images of w: up to p (value, derivative) pairs.
 *
 * # Safety
 * As for [`corrdyn_power_forward`].
 */
enum CorrdynStatus corrdyn_power_backward(const struct CorrdynPower *handle,
                                          double w_re,
                                          double w_im,
                                          double *values,
                                          double *derivatives,
                                          size_t capacity,
                                          size_t *out_len);

/**
 * Escape radius max(2^(1/(β-1)), 2|c|).
 *
 * # Safety
 * `handle` must be live.
 */
double corrdyn_power_escape_radius(const struct CorrdynPower *handle);

/**
 * Filled-Julia membership verdict for z via the depth-limited orbit tree.
 * Pass radius = 0 for the sound default.
 *
 * # Safety
 * `handle` live; `out` writable.
 */
enum CorrdynStatus corrdyn_power_filled_verdict(const struct CorrdynPower *handle,
                                                double z_re,
                                                double z_im,
                                                uint32_t max_depth,
                                                uint64_t node_budget,
                                                double radius,
                                                enum CorrdynVerdict *out);

/**
 * Render the filled Julia set over a square-pixel window and write a binary
 * PPM (P6) file. Deterministic for a given configuration, including across
 * worker counts.
 *
 * # Safety
 * `handle` live; `path` a NUL-terminated UTF-8 path.
 */
enum CorrdynStatus corrdyn_power_render_filled_ppm(const struct CorrdynPower *handle,
                                                   double center_re,
                                                   double center_im,
                                                   double width,
                                                   uint32_t px,
                                                   uint32_t py,
                                                   uint32_t max_depth,
                                                   uint64_t node_budget,
                                                   size_t workers,
                                                   const char *path);

/**
 * Create a mating correspondence handle (a != 1); `covj_coordinates`
 * selects the conjugated J∘Cov coordinate system.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum CorrdynStatus corrdyn_mating_new(double a_re,
                                      double a_im,
                                      bool covj_coordinates,
                                      struct CorrdynMating **out);

/**
 * Release a mating handle. Null is a no-op.
 *
 * # Safety
 * `handle` must come from `corrdyn_mating_new` and not be freed twice.
 */
void corrdyn_mating_free(struct CorrdynMating *handle);

/**
 * The two forward images of z under F_a. `branch_point` is set when the
 * images coincide (derivatives withheld as NaN there).
 *
 * # Safety
 * `handle` live; `values` holds 4 doubles; `derivatives` null or 4 doubles;
 * `branch_point` null or one bool.
 */
enum CorrdynStatus corrdyn_mating_forward(const struct CorrdynMating *handle,
                                          double z_re,
                                          double z_im,
                                          double *values,
                                          double *derivatives,
                                          bool *branch_point);

/**
 * The two backward images of w under F_a.
 *
 * # Safety
 * As for [`corrdyn_mating_forward`].
 */
enum CorrdynStatus corrdyn_mating_backward(const struct CorrdynMating *handle,
                                           double w_re,
                                           double w_im,
                                           double *values,
                                           double *derivatives,
                                           bool *branch_point);

/**
 * Fixed points of F_a with multipliers and stability classes. The parabolic
 * point P is always among them with multiplier 1.
 *
 * # Safety
 * `handle` live; `points`/`multipliers` hold 2*capacity doubles; `classes`
 * capacity entries; `out_len` one usize.
 */
enum CorrdynStatus corrdyn_mating_fixed_points(const struct CorrdynMating *handle,
                                               double *points,
                                               double *multipliers,
                                               enum CorrdynPointClass *classes,
                                               size_t capacity,
                                               size_t *out_len);

/**
 * Digits of the Sturmian word W_{p/q} (1 for α, 0 for β), canonical cyclic
 * representative.
 *
 * # Safety
 * `digits` holds capacity bytes; `out_len` one usize.
 */
enum CorrdynStatus corrdyn_sturmian_word(uint64_t p,
                                         uint64_t q,
                                         uint8_t *digits,
                                         size_t capacity,
                                         size_t *out_len);

/**
 * The Yoccoz disk for rotation number p/q: tangent to the imaginary axis
 * at 2πip/q. `classical` selects the polynomial inequality with degree `d`
 * and ray-cycle count `m`; otherwise the mating inequality is used.
 *
 * # Safety
 * The three out-pointers must be writable.
 */
enum CorrdynStatus corrdyn_yoccoz_disk(uint64_t p,
                                       uint64_t q,
                                       bool classical,
                                       uint32_t d,
                                       uint32_t m,
                                       double *center_re,
                                       double *center_im,
                                       double *radius);

/**
 * Minkowski h of a continued-fraction literal such as "[1;1,2]" or
 * "[1;(1)]" (periodic tail in parentheses), as a double approximation.
 *
 * # Safety
 * `cf_literal` NUL-terminated; `out` writable.
 */
enum CorrdynStatus corrdyn_minkowski_h(const char *cf_literal,
                                       uint32_t precision_bits,
                                       double *out);

/**
 * CIFS construction and Moran upper bound at parameter c: fills the chosen
 * disk radius ρ, the uniform contraction r, and s* = log q / log(1/r).
 *
 * # Safety
 * The three out-pointers must be writable.
 */
enum CorrdynStatus corrdyn_cifs_dimension_bound(uint32_t p,
                                                uint32_t q,
                                                double c_re,
                                                double c_im,
                                                double *rho,
                                                double *contraction,
                                                double *s_star);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CORRDYN_H */
