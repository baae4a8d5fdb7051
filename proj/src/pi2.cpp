#include "breakup/pi2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "breakup/banded.hpp"
#include "breakup/errors.hpp"

namespace breakup {

namespace {

// Fornberg's recursion: weights for the m-th derivative at z from nodes x.
std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = int(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k > 0; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k > 0; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

// Stencil: first column and weights (already divided by h^m).
struct Stencil {
  int first = 0;
  std::vector<double> w;
  double apply(const std::vector<double>& U) const {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * U[first + int(k)];
    return s;
  }
};

Stencil make_stencil(const Pi2Grid& g, int row, int first, int count, int m) {
  std::vector<double> offs(count);
  for (int k = 0; k < count; ++k) offs[k] = double(first + k - row);
  auto w = fd_weights(0.0, offs, m);
  const double scale = std::pow(g.h, -m);
  for (double& v : w) v *= scale;
  return {first, std::move(w)};
}

// Fourth-order derivative stencils at interior row i (2 <= i <= n-3).
struct RowStencils {
  Stencil d1, d2, d3, d4;
};

RowStencils row_stencils(const Pi2Grid& g, int i) {
  RowStencils s;
  s.d1 = make_stencil(g, i, i - 2, 5, 1);
  s.d2 = make_stencil(g, i, i - 2, 5, 2);
  int first = i - 3, count = 7;
  if (first < 0) {
    first = 0;
    count = 8;
  } else if (first + count > g.n) {
    count = 8;
    first = g.n - count;
  }
  s.d3 = make_stencil(g, i, first, count, 3);
  s.d4 = make_stencil(g, i, first, count, 4);
  return s;
}

// One-sided U_X at the two ends.
Stencil end_derivative(const Pi2Grid& g, bool left) {
  return left ? make_stencil(g, 0, 0, 5, 1) : make_stencil(g, g.n - 1, g.n - 5, 5, 1);
}

void check_grid(const Pi2Grid& g) {
  if (g.n < 9 || int(g.X.size()) != g.n) throw ShapeError("Pi2Grid needs at least 9 nodes");
  if (g.L < 10.0) throw RangeError("Pi2Grid half-length must be at least 10 for the boundary series");
}

double max_abs(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double m = 0.0;
  for (std::size_t i = from; i < to; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

double interior_norm(const std::vector<double>& F) { return max_abs(F, 2, F.size() - 2); }

double full_norm(const std::vector<double>& F) {
  double m = 0.0;
  for (double v : F) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(v));
  }
  return m;
}

// Real root of U^3 - 6 T U + 6 X = 0 when it is unique.
double cardano_root(double X, double T) {
  const double p = -6.0 * T, q = 6.0 * X;
  const double disc = 0.25 * q * q + p * p * p / 27.0;
  const double sd = std::sqrt(std::max(disc, 0.0));
  // Pick the larger-magnitude term first to avoid cancellation.
  const double A = std::cbrt(-0.5 * q + (q <= 0.0 ? sd : -sd));
  double U = A == 0.0 ? 0.0 : A - p / (3.0 * A);
  for (int it = 0; it < 3; ++it) {
    const double f = U * U * U - 6.0 * T * U + 6.0 * X;
    const double df = 3.0 * U * U - 6.0 * T;
    if (df == 0.0) break;
    U -= f / df;
  }
  return U;
}

// Banded Jacobian of pi2_residual.
class Jacobian {
 public:
  explicit Jacobian(const Pi2Grid& g)
      : n_(g.n), rows_(g.n), dl_(end_derivative(g, true)), dr_(end_derivative(g, false)) {
    for (int i = 2; i < n_ - 2; ++i) rows_[i] = row_stencils(g, i);
  }

  BandMatrix build(double T, const std::vector<double>& U) const {
    const int n = n_;
    BandMatrix J(n, 5, 5);
    J(0, 0) = 1.0;
    for (std::size_t k = 0; k < dl_.w.size(); ++k) J(1, dl_.first + int(k)) = dl_.w[k];
    for (std::size_t k = 0; k < dr_.w.size(); ++k) J(n - 2, dr_.first + int(k)) = dr_.w[k];
    J(n - 1, n - 1) = 1.0;
    for (int i = 2; i < n - 2; ++i) {
      const auto& s = rows_[i];
      const double u = U[i], u1 = s.d1.apply(U), u2 = s.d2.apply(U);
      J(i, i) += T - 0.5 * u * u - u2 / 12.0;
      for (std::size_t k = 0; k < s.d1.w.size(); ++k) {
        J(i, s.d1.first + int(k)) -= u1 / 12.0 * s.d1.w[k];
        J(i, s.d2.first + int(k)) -= u / 12.0 * s.d2.w[k];
      }
      for (std::size_t k = 0; k < s.d4.w.size(); ++k) J(i, s.d4.first + int(k)) -= s.d4.w[k] / 240.0;
    }
    return J;
  }

 private:
  int n_;
  std::vector<RowStencils> rows_;
  Stencil dl_, dr_;
};

// dU/dT along the solution branch: J V = -dF/dT.
std::vector<double> tangent(const Pi2Grid& g, double T, const std::vector<double>& U) {
  const int n = g.n;
  std::vector<double> rhs(n);
  for (int i = 2; i < n - 2; ++i) rhs[i] = -U[i];
  const double c2 = std::cbrt(36.0);
  const double a = g.L;
  // Boundary rows are U - series(T); their T-derivative is -d(series)/dT.
  rhs[0] = c2 / (3.0 * std::cbrt(a));
  rhs[1] = c2 / (9.0 * std::pow(a, 4.0 / 3.0));
  rhs[n - 2] = c2 / (9.0 * std::pow(a, 4.0 / 3.0));
  rhs[n - 1] = -c2 / (3.0 * std::cbrt(a));
  return Jacobian(g).build(T, U).solve(rhs);
}

}  // namespace

Pi2Grid::Pi2Grid(double half_length, int nodes) : L(half_length), n(nodes) {
  if (!(half_length > 0.0) || nodes < 9) throw ShapeError("Pi2Grid: need L > 0 and n >= 9");
  h = 2.0 * L / (n - 1);
  X.resize(n);
  for (int i = 0; i < n; ++i) X[i] = L * double(2 * i - (n - 1)) / double(n - 1);
}

Pi2Grid Pi2Grid::with_spacing(double half_length, double spacing) {
  if (!(spacing > 0.0)) throw ShapeError("Pi2Grid: spacing must be positive");
  return Pi2Grid(half_length, int(std::lround(2.0 * half_length / spacing)) + 1);
}

const Pi2Solution& Pi2Family::at(double T) const {
  for (const auto& m : members)
    if (m.T == T) return m;
  throw RangeError("Pi2Family: no member at T = " + std::to_string(T));
}

bool Pi2Family::contains(double T) const {
  return std::any_of(members.begin(), members.end(), [&](const auto& m) { return m.T == T; });
}

std::pair<double, double> asymptotic_boundary(double X, double T) {
  const double a = std::abs(X);
  if (!(a >= 10.0)) throw RangeError("asymptotic_boundary requires |X| >= 10");
  const double s = X > 0.0 ? 1.0 : -1.0;
  const double c1 = std::cbrt(6.0), c2 = c1 * c1;
  const double U = -s * c1 * std::cbrt(a) - s * c2 * T / (3.0 * std::cbrt(a));
  const double UX = -c1 / (3.0 * std::pow(a, 2.0 / 3.0)) + c2 * T / (9.0 * std::pow(a, 4.0 / 3.0));
  return {U, UX};
}

std::vector<double> initial_guess(const Pi2Grid& grid, double T) {
  std::vector<double> U(grid.n);
  const double xs = T > 0.0 ? (2.0 / 3.0) * T * std::sqrt(2.0 * T) : 0.0;
  const double u_edge = T > 0.0 ? 2.0 * std::sqrt(2.0 * T) : 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double X = grid.X[i];
    if (T <= 0.0 || std::abs(X) > xs) {
      U[i] = cardano_root(X, T);
      continue;
    }
    // Hermite cubic from (-xs, u_edge) to (xs, -u_edge), end slopes -1/(3T).
    const double w = 2.0 * xs, s = (X + xs) / w;
    const double slope = -1.0 / (3.0 * T) * w;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    U[i] = h00 * u_edge + h10 * slope + h01 * (-u_edge) + h11 * slope;
  }
  return U;
}

std::vector<double> pi2_residual(const Pi2Grid& grid, double T, const std::vector<double>& U) {
  check_grid(grid);
  if (int(U.size()) != grid.n) throw ShapeError("pi2_residual: size mismatch");
  const int n = grid.n;
  std::vector<double> F(n);
  for (int i = 2; i < n - 2; ++i) {
    const auto s = row_stencils(grid, i);
    const double u = U[i], u1 = s.d1.apply(U), u2 = s.d2.apply(U), u4 = s.d4.apply(U);
    F[i] = T * u - u * u * u / 6.0 - (u1 * u1 + 2.0 * u * u2) / 24.0 - u4 / 240.0 - grid.X[i];
  }
  const auto left = asymptotic_boundary(grid.X[0], T);
  const auto right = asymptotic_boundary(grid.X[n - 1], T);
  F[0] = U[0] - left.first;
  F[1] = end_derivative(grid, true).apply(U) - left.second;
  F[n - 2] = end_derivative(grid, false).apply(U) - right.second;
  F[n - 1] = U[n - 1] - right.first;
  return F;
}

Pi2Solution newton_solve(const Pi2Grid& grid, double T, std::vector<double> U,
                         const NewtonOptions& opt) {
  check_grid(grid);
  const int n = grid.n;
  if (int(U.size()) != n) throw ShapeError("newton_solve: guess size mismatch");
  for (double v : U)
    if (!std::isfinite(v)) throw DomainError("newton_solve: guess is not finite");

  const Jacobian jac(grid);
  auto F = pi2_residual(grid, T, U);
  double fnorm = full_norm(F);
  double last_step = std::numeric_limits<double>::infinity();
  Pi2Solution sol;
  sol.T = T;
  sol.grid = grid;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const BandMatrix J = jac.build(T, U);
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -F[i];
    const auto dU = J.solve(rhs);

    double lambda = 1.0;
    std::vector<double> trial(n);
    std::vector<double> Ft;
    double tnorm = 0.0;
    for (;;) {
      for (int i = 0; i < n; ++i) trial[i] = U[i] + lambda * dU[i];
      Ft = pi2_residual(grid, T, trial);
      tnorm = full_norm(Ft);
      // Near convergence the residual sits at its rounding floor; take full steps.
      if (tnorm <= fnorm || fnorm < 1e-6 || lambda < 1.0 / 64.0) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(tnorm)) throw ConvergenceError("newton_solve: iterate left the finite range", T);
    const double step = lambda * max_abs(dU, 0, dU.size());
    U.swap(trial);
    F.swap(Ft);
    fnorm = tnorm;
    sol.iterations = it;
    // Steps that stop shrinking at this size are rounding noise.
    const bool stagnated = step >= 0.5 * last_step && step < opt.stagnation_step;
    if (step < opt.step_tol || fnorm < opt.residual_tol || stagnated) {
      sol.U = std::move(U);
      sol.residual = interior_norm(F);
      sol.boundary_mismatch = std::max({std::abs(F[0]), std::abs(F[1]), std::abs(F[n - 2]),
                                        std::abs(F[n - 1])});
      return sol;
    }
    last_step = step;
  }
  throw ConvergenceError("newton_solve: no convergence in " + std::to_string(opt.max_iterations) +
                             " iterations",
                         T);
}

Pi2Family continuation_in_T(const Pi2Grid& grid, std::vector<double> ladder, double max_step,
                            const NewtonOptions& opt) {
  if (!(max_step > 0.0)) throw DomainError("continuation_in_T: step must be positive");
  std::sort(ladder.begin(), ladder.end());
  ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
  Pi2Family fam;
  fam.grid = grid;
  fam.members.push_back(newton_solve(grid, 0.0, initial_guess(grid, 0.0), opt));

  auto walk = [&](double target) {
    // Warm start from the nearest member on the same side of T = 0.
    Pi2Solution cur = fam.members.front();
    for (const auto& m : fam.members)
      if (m.T * target >= 0.0 && std::abs(m.T - target) < std::abs(cur.T - target)) cur = m;
    double step = max_step;
    while (cur.T != target) {
      const double dir = target > cur.T ? 1.0 : -1.0;
      double next = cur.T + dir * step;
      if ((next - target) * dir >= -1e-12) next = target;
      auto guess = cur.U;
      const auto v = tangent(grid, cur.T, cur.U);
      for (int i = 0; i < grid.n; ++i) guess[i] += (next - cur.T) * v[i];
      try {
        cur = newton_solve(grid, next, std::move(guess), opt);
      } catch (const ConvergenceError&) {
        step *= 0.5;
        if (step < max_step / 16.0)
          throw ConvergenceError("continuation_in_T: stalled before T = " + std::to_string(next), next);
        continue;
      } catch (const SingularityError&) {
        step *= 0.5;
        if (step < max_step / 16.0)
          throw ConvergenceError("continuation_in_T: singular Jacobian near T = " + std::to_string(next),
                                 next);
        continue;
      }
      if (!fam.contains(cur.T)) fam.members.push_back(cur);
    }
  };
  for (auto it = ladder.rbegin(); it != ladder.rend(); ++it)
    if (*it < 0.0) walk(*it);
  for (double T : ladder)
    if (T > 0.0) walk(T);
  std::sort(fam.members.begin(), fam.members.end(),
            [](const auto& a, const auto& b) { return a.T < b.T; });
  return fam;
}

double evaluate(const Pi2Solution& sol, double X) {
  const auto& g = sol.grid;
  if (!(std::abs(X) <= g.L)) throw RangeError("evaluate: |X| exceeds the grid half-length");
  int i0 = int(std::floor((X + g.L) / g.h)) - 2;
  i0 = std::clamp(i0, 0, g.n - 6);
  double sum = 0.0;
  for (int j = i0; j < i0 + 6; ++j) {
    double basis = 1.0;
    for (int m = i0; m < i0 + 6; ++m)
      if (m != j) basis *= (X - g.X[m]) / (g.X[j] - g.X[m]);
    sum += basis * sol.U[j];
  }
  return sum;
}

double evaluate_extended(const Pi2Solution& sol, double X) {
  if (std::abs(X) <= sol.grid.L) return evaluate(sol, X);
  return asymptotic_boundary(X, sol.T).first;
}

double kdv_crosscheck(const Pi2Family& family) {
  const auto& m = family.members;
  if (m.size() < 3) throw SpacingError("kdv_crosscheck needs at least three members");
  const double dT = m[1].T - m[0].T;
  for (std::size_t i = 1; i < m.size(); ++i) {
    const double d = m[i].T - m[i - 1].T;
    if (!(d > 0.0) || std::abs(d - dT) > 1e-9 * std::max(1.0, std::abs(dT)))
      throw SpacingError("kdv_crosscheck needs an equally spaced T ladder");
  }
  const std::size_t mid = m.size() / 2;
  const auto& g = m[mid].grid;
  const auto& U = m[mid].U;
  double worst = 0.0;
  for (int i = 3; i < g.n - 3; ++i) {
    if (std::abs(g.X[i]) > 0.5 * g.L) continue;
    const auto s = row_stencils(g, i);
    const double ut = (m[mid + 1].U[i] - m[mid - 1].U[i]) / (2.0 * dT);
    const double r = ut + U[i] * s.d1.apply(U) + s.d3.apply(U) / 12.0;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace breakup
