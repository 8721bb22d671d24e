#include <math.h>
#include <stdio.h>

#include "halfwave.h"

#define CHECK(call)                                                        \
  do {                                                                     \
    HwStatus s_ = (call);                                                  \
    if (s_ != HW_STATUS_OK) {                                              \
      fprintf(stderr, "%s failed (%d): %s\n", #call, s_, hw_last_error()); \
      return 1;                                                            \
    }                                                                      \
  } while (0)

int main(void) {
  HwGrid *grid = NULL;
  HwProfile *profile = NULL;
  HwProfileDiagnostics diag;
  HwSolverOptions opts = hw_solver_options_default();
  double v[1] = {0.5};

  CHECK(hw_grid_new(1, 1024, 50.0, &grid));
  CHECK(hw_solve_profile(grid, 3.0, v, 1, &opts, &profile));
  CHECK(hw_profile_diagnostics(profile, &diag));
  if (!diag.converged || diag.el_residual > opts.tol) {
    fprintf(stderr, "no convergence: %g\n", diag.el_residual);
    return 1;
  }

  HwGrid *bad = NULL;
  if (hw_grid_new(1, 1000, 1.0, &bad) != HW_STATUS_INVALID_ARGUMENT || bad != NULL) {
    fprintf(stderr, "invalid grid accepted\n");
    return 1;
  }

  printf("%s converged in %zu iterations, C = %.6f\n", hw_version(), diag.iters, diag.optimal_constant);
  hw_profile_free(profile);
  hw_grid_free(grid);
  return 0;
}
