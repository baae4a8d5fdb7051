#include "breakup/hopf.hpp"

#include <cmath>
#include <limits>

#include "breakup/errors.hpp"

namespace breakup {

CharacteristicSolver::CharacteristicSolver(const InitialProfile& profile,
                                           const CatastrophePoint& point)
    : profile_(&profile), point_(point) {}

HopfSample CharacteristicSolver::solve(double x, double t) {
  const InitialProfile& p = *profile_;
  if (t < 0.0) throw RangeError("hopf: t must be non-negative");
  const double t_c = point_.t_c;
  const bool at_tc = std::abs(t - t_c) <= 1e-15 * t_c;
  if (t > t_c && !at_tc) throw RangeError("hopf: t beyond t_c is multivalued");

  // x = 6 t u0(xi) + xi with -1 <= u0 <= 0 puts xi in [x, x + 6t].
  auto G = [&](double xi) { return 6.0 * t * p.u0(xi) + xi - x; };
  double lo = x, hi = x + 6.0 * t;
  double xi;
  // At t_c the root is triple, so bisection only resolves xi to the cube root
  // of the rounding unit; next to x_c the local cubic model is sharper.
  const double d3 = p.d3u0(point_.xi_c);
  if (at_tc && std::abs(x - point_.x_c) <= 1e-12 && d3 != 0.0) {
    xi = point_.xi_c + std::cbrt((x - point_.x_c) / (t_c * d3));
    lo = hi = xi;
  } else if (hi == lo) {
    xi = x;
  } else {
    xi = last_foot_ && *last_foot_ > lo && *last_foot_ < hi ? *last_foot_
                                                            : 0.5 * (lo + hi);
    const double g_lo = G(lo);
    if (g_lo >= 0.0) {
      xi = lo;
      hi = lo;
    }
    const double tol = at_tc ? 1e-12 : 1e-14;
    for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::abs(xi)); ++it) {
      const double g = G(xi);
      if (g == 0.0) break;
      if (g > 0.0)
        hi = xi;
      else
        lo = xi;
      double next = 0.5 * (lo + hi);
      const double slope = 1.0 + 6.0 * t * p.du0(xi);
      // Near the cusp the slope degenerates quadratically; plain bisection there.
      if (!at_tc && slope > 1e-8) {
        const double newton = xi - g / slope;
        if (newton > lo && newton < hi) next = newton;
      }
      const double step = std::abs(next - xi);
      xi = next;
      if (step < 1e-16 * std::max(1.0, std::abs(xi))) break;
    }
  }
  last_foot_ = xi;
  HopfSample s;
  s.x = x;
  s.t = t;
  s.foot = xi;
  s.u = p.u0(xi);
  const double d = p.du0(xi);
  const double denom = 1.0 + 6.0 * t * d;
  if (at_tc && std::abs(xi - point_.xi_c) < 1e-6 && denom <= 1e-10)
    s.ux = -std::numeric_limits<double>::infinity();
  else
    s.ux = d / denom;
  return s;
}

HopfSample solve_characteristic(const InitialProfile& profile,
                                const CatastrophePoint& point, double x, double t) {
  CharacteristicSolver solver(profile, point);
  return solver.solve(x, t);
}

}  // namespace breakup
