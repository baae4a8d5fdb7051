#pragma once

#include <utility>
#include <vector>

namespace breakup {

/// Uniform grid on [-L, L].
struct Pi2Grid {
  double L = 25.0;
  int n = 0;
  double h = 0.0;
  std::vector<double> X;

  Pi2Grid() = default;
  Pi2Grid(double half_length, int nodes);
  /// Node count chosen so that the spacing is as close as possible to h.
  static Pi2Grid with_spacing(double half_length, double h);
};

struct Pi2Solution {
  double T = 0.0;
  Pi2Grid grid;
  std::vector<double> U;
  double residual = 0.0;  // interior infinity norm
  int iterations = 0;
  double boundary_mismatch = 0.0;
};

/// Solutions over a T ladder on one grid, sorted by T.
struct Pi2Family {
  Pi2Grid grid;
  std::vector<Pi2Solution> members;

  /// Member with exactly this T; RangeError if absent.
  const Pi2Solution& at(double T) const;
  bool contains(double T) const;
};

struct NewtonOptions {
  int max_iterations = 50;
  double step_tol = 1e-12;
  double residual_tol = 1e-10;
  /// Steps below this size that no longer shrink are taken as converged;
  /// the residual floor grows like h^-4 times the rounding unit.
  double stagnation_step = 1e-8;
};

/// Two-term large-|X| series for U and U_X.  Requires |X| >= 10.
std::pair<double, double> asymptotic_boundary(double X, double T);

/// Root of the dispersionless part X = T U - U^3 / 6, with a monotone
/// connector across the three-root window when T > 0.
std::vector<double> initial_guess(const Pi2Grid& grid, double T);

/// Nodewise residual.  Interior rows carry the ODE residual, rows 0, 1,
/// n-2, n-1 the mismatch of the pinned U and U_X.
std::vector<double> pi2_residual(const Pi2Grid& grid, double T, const std::vector<double>& U);

Pi2Solution newton_solve(const Pi2Grid& grid, double T, std::vector<double> guess,
                         const NewtonOptions& opt = {});

/// Solves T = 0 from the initial guess, then walks outward in T with steps of
/// at most max_step; intermediate steps are kept in the family.
Pi2Family continuation_in_T(const Pi2Grid& grid, std::vector<double> ladder,
                            double max_step = 0.25, const NewtonOptions& opt = {});

/// Quintic interpolation through the six nearest nodes; RangeError for |X| > L.
double evaluate(const Pi2Solution& sol, double X);
/// As evaluate, but falls back to the asymptotic series beyond the grid.
double evaluate_extended(const Pi2Solution& sol, double X);

/// Infinity norm of U_T + U U_X + U_XXX / 12 over |X| <= L/2 at the middle
/// member, with U_T from central differences across the family.
double kdv_crosscheck(const Pi2Family& family);

}  // namespace breakup
