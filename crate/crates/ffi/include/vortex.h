#ifndef VORTEX_H
#define VORTEX_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum VortexStatus {
  VORTEX_STATUS_OK = 0,
  VORTEX_STATUS_NULL_POINTER = 1,
  VORTEX_STATUS_INVALID_PARAMETER = 2,
  VORTEX_STATUS_PARSE_ERROR = 3,
  VORTEX_STATUS_NON_CONVERGENCE = 4,
  VORTEX_STATUS_SINGULAR = 5,
  VORTEX_STATUS_IO_ERROR = 6,
  VORTEX_STATUS_FAILURE = 7,
  VORTEX_STATUS_PANIC = 8,
} VortexStatus;

/**
 * Opaque measure or difference of two measures.
 */
typedef struct VortexField VortexField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a measure spec into a new handle, released with [`vortex_field_free`].
 *
 * # Safety
 * `spec` must be a nul-terminated string; `out` must be writable.
 */
enum VortexStatus vortex_field_new(const char *spec, struct VortexField **out);

/**
 * Handle for the difference `plus − minus` of two specs.
 *
 * # Safety
 * As [`vortex_field_new`].
 */
enum VortexStatus vortex_field_difference(const char *plus,
                                          const char *minus,
                                          struct VortexField **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be used afterwards.
 */
void vortex_field_free(struct VortexField *h);

/**
 * `ω(B(0, r))`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum VortexStatus vortex_ball_mass(const struct VortexField *h, double r, double *out);

/**
 * Inner moment `m_{r,n}` (`outer == 0`) or outer moment `M_{r,n}` (`outer != 0`, `n ≥ 1`).
 *
 * # Safety
 * `h` must be a live handle; `re` and `im` must be writable.
 */
enum VortexStatus vortex_moment(const struct VortexField *h,
                                double r,
                                uint32_t n,
                                int32_t outer,
                                double *re,
                                double *im);

/**
 * Circle average `A_r` of `|v|²` from the moment series.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum VortexStatus vortex_spherical_average(const struct VortexField *h, double r, double *out);

/**
 * Local kinetic energy `E_r`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum VortexStatus vortex_kinetic_energy(const struct VortexField *h, double r, double *out);

/**
 * Velocity at `x + iy`.
 *
 * # Safety
 * `h` must be a live handle; `vx` and `vy` must be writable.
 */
enum VortexStatus vortex_velocity(const struct VortexField *h,
                                  double x,
                                  double y,
                                  double *vx,
                                  double *vy);

/**
 * Energy bounds for ball mass `c·r^α`.
 *
 * # Safety
 * `lower` and `upper` must be writable.
 */
enum VortexStatus vortex_energy_bounds(double c,
                                       double alpha,
                                       double r,
                                       double *lower,
                                       double *upper);

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into the library from the same thread.
 */
const char *vortex_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *vortex_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VORTEX_H */
