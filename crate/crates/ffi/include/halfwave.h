#ifndef HALFWAVE_H
#define HALFWAVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Seed of the profile iteration.
typedef enum HwSeed {
  HW_SEED_GAUSSIAN = 0,
  HW_SEED_EXPLICIT_Q0 = 1,
  HW_SEED_RANDOM = 2,
} HwSeed;

// Result codes.
typedef enum HwStatus {
  HW_STATUS_OK = 0,
  HW_STATUS_NULL_POINTER = 1,
  HW_STATUS_INVALID_ARGUMENT = 2,
  HW_STATUS_GRID_MISMATCH = 3,
  HW_STATUS_SUPERSONIC = 4,
  HW_STATUS_INVALID_EXPONENT = 5,
  HW_STATUS_ZERO_FIELD = 6,
  HW_STATUS_TRIVIAL_LIMIT = 7,
  HW_STATUS_DIVERGENCE = 8,
  HW_STATUS_NOT_CONVERGED = 9,
  HW_STATUS_RESOLUTION_LOSS = 10,
  HW_STATUS_QUADRATURE = 11,
  HW_STATUS_IO = 12,
  HW_STATUS_FORMAT = 13,
  HW_STATUS_BLOW_UP = 14,
  HW_STATUS_PANIC = 15,
  HW_STATUS_INTERNAL = 16,
} HwStatus;

// Complex samples on a grid.
typedef struct HwField HwField;

// Periodic grid `[-L, L)^d` with `n` points per axis.
typedef struct HwGrid HwGrid;

// A solved profile together with its diagnostics.
typedef struct HwProfile HwProfile;

typedef struct HwSolverOptions {
  size_t max_iters;
  double tol;
  // Stabilizing exponent; values <= 0 select `p / (p - 1)`.
  double stabilizer;
  // In `(0, 1]`.
  double damping;
  enum HwSeed seed;
  // RNG seed for `HW_SEED_RANDOM`.
  uint64_t random_seed;
} HwSolverOptions;

typedef struct HwProfileDiagnostics {
  double el_residual;
  double t_v;
  double mass;
  double lp1_integral;
  double weinstein_value;
  double optimal_constant;
  double gamma;
  double boundary_fraction;
  size_t iters;
  bool converged;
  bool critical;
  bool mass_leakage;
} HwProfileDiagnostics;

typedef struct HwIdentityReport {
  // Entries beyond `dim` are zero.
  double virial_residuals[3];
  size_t dim;
  double pohozaev_residual_1;
  double pohozaev_residual_2;
  double el_residual;
} HwIdentityReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *hw_version(void);

// Message of the last failed call on this thread, or an empty string.
//
// The pointer stays valid until the next failing call on the same thread.
const char *hw_last_error(void);

struct HwSolverOptions hw_solver_options_default(void);

// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum HwStatus hw_grid_new(size_t dim, size_t n, double half_extent, struct HwGrid **out);

// # Safety
// `grid` must be null or a handle from `hw_grid_new` not yet freed.
void hw_grid_free(struct HwGrid *grid);

// Number of samples `n^d`, or 0 for a null handle.
//
// # Safety
// `grid` must be null or a live handle.
size_t hw_grid_len(const struct HwGrid *grid);

// # Safety
// `field` must be null or a live handle.
size_t hw_field_len(const struct HwField *field);

// Field from `len` interleaved `(re, im)` pairs; `len` must equal `n^d`.
//
// # Safety
// `grid` must be live, `values` must point to `2 * len` doubles and `out` to
// storage for one handle.
enum HwStatus hw_field_new(const struct HwGrid *grid,
                           const double *values,
                           size_t len,
                           struct HwField **out);

// # Safety
// `field` must be null or a live handle.
void hw_field_free(struct HwField *field);

// Copies the samples into `out` as `len` interleaved pairs.
//
// # Safety
// `field` must be live and `out` must have room for `2 * len` doubles.
enum HwStatus hw_field_values(const struct HwField *field, double *out, size_t len);

// Reads an `HWF1` field file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` valid for one handle.
enum HwStatus hw_field_read(const char *path, struct HwField **out);

// # Safety
// `field` must be live and `path` a NUL-terminated string.
enum HwStatus hw_field_write(const struct HwField *field, const char *path);

// `M(u) = int |u|^2`.
//
// # Safety
// `field` must be live and `out` writable.
enum HwStatus hw_field_mass(const struct HwField *field, double *out);

// `T_v(u)` for the velocity `v[0..dim]`.
//
// # Safety
// `field` must be live, `v` must point to `dim` doubles and `out` be writable.
enum HwStatus hw_quadratic_form_t(const struct HwField *field,
                                  const double *v,
                                  size_t dim,
                                  double *out);

// Weinstein quotient of `field` for velocity `v` and power `p`.
//
// # Safety
// As for [`hw_quadratic_form_t`].
enum HwStatus hw_weinstein(const struct HwField *field,
                           const double *v,
                           size_t dim,
                           double p,
                           double *out);

// Solves for the subcritical profile with `omega = 1` on `grid`.
//
// Running out of iterations is not an error; check
// `HwProfileDiagnostics::converged`.
//
// # Safety
// `grid` must be live, `v` must point to `dim` doubles, `options` may be null
// (defaults) and `out` must be valid for one handle.
enum HwStatus hw_solve_profile(const struct HwGrid *grid,
                               double p,
                               const double *v,
                               size_t dim,
                               const struct HwSolverOptions *options,
                               struct HwProfile **out);

// Solves the energy-critical problem (`d >= 2`).
//
// # Safety
// As for [`hw_solve_profile`].
enum HwStatus hw_solve_critical_profile(const struct HwGrid *grid,
                                        const double *v,
                                        size_t dim,
                                        const struct HwSolverOptions *options,
                                        struct HwProfile **out);

// # Safety
// `profile` must be null or a live handle.
void hw_profile_free(struct HwProfile *profile);

// # Safety
// `profile` must be live and `out` writable.
enum HwStatus hw_profile_diagnostics(const struct HwProfile *profile,
                                     struct HwProfileDiagnostics *out);

// Copy of the profile samples as a new field handle.
//
// # Safety
// `profile` must be live and `out` valid for one handle.
enum HwStatus hw_profile_field(const struct HwProfile *profile, struct HwField **out);

// Virial and Pohozaev residuals of `field` for power `p`, velocity `v` and
// mass parameter `m` (the Riesz symbol is `xi_k / sqrt(|xi|^2 + m^2)`).
//
// # Safety
// `field` must be live, `v` must point to `dim` doubles and `out` be writable.
enum HwStatus hw_identity_report(const struct HwField *field,
                                 double p,
                                 const double *v,
                                 size_t dim,
                                 double m,
                                 struct HwIdentityReport *out);

// Resolvent kernel `G_v(x)` by quadrature.
//
// # Safety
// `x` and `v` must point to `dim` doubles; the outputs must be writable
// (`error` may be null).
enum HwStatus hw_kernel_eval(const double *x,
                             const double *v,
                             size_t dim,
                             double *re,
                             double *im,
                             double *error);

// `(sqrt(-Lap) + i v.grad + 1)^{-1} field` as a new handle.
//
// # Safety
// `field` must be live, `v` must point to `dim` doubles and `out` be valid
// for one handle.
enum HwStatus hw_resolvent_apply(const struct HwField *field,
                                 const double *v,
                                 size_t dim,
                                 struct HwField **out);

// Strang-split evolution of `field` to time `final_time`; the final state is
// returned as a new handle together with the relative mass and energy drifts.
// Returns `HW_STATUS_BLOW_UP` (with the last finite state in `out`) when the
// solution stops being finite.
//
// # Safety
// `field` must be live, `out` valid for one handle; the drift pointers may be null.
enum HwStatus hw_evolve(const struct HwField *field,
                        double p,
                        double dt,
                        double final_time,
                        struct HwField **out,
                        double *mass_drift,
                        double *energy_drift);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HALFWAVE_H */
