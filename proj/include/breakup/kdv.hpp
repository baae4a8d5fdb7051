#pragma once

#include <functional>
#include <vector>

#include "breakup/profile.hpp"

namespace breakup {

struct KdvConfig {
  double L_d = 15.0;  // periodic box [-L_d, L_d)
  int N = 1 << 14;
  double dt = 1e-4;
  double eps = 0.1;
  double t_end = 0.0;
  double dealias = 2.0 / 3.0;
};

/// Mode count by the resolution policy: 2^12 down to eps = 0.07, 2^13 down to
/// 0.05, 2^14 below.
int default_modes(double eps);

/// Step policy dt = (L_d / N) / (256 eps).  Lawson RK4 shows a slow parametric
/// instability well below the nonlinear CFL limit; this keeps a soliton
/// stable over a full box period and is checked by step halving.
double default_dt(double L_d, int N, double eps);

struct KdvField {
  double t = 0.0;
  std::vector<double> u;
  double eps = 0.0;
  KdvConfig config;
  double mass0 = 0.0;
  double momentum0 = 0.0;

  double x(int i) const { return -config.L_d + 2.0 * config.L_d * i / config.N; }
  double mass() const;
  double momentum() const;
  /// Relative drift of mass and momentum since initialization.
  double mass_drift() const;
  double momentum_drift() const;
};

/// Throws ConfigError when the datum does not decay to 1e-12 at the box edge.
KdvField init_field(const InitialProfile& profile, const KdvConfig& config);
KdvField init_field(const std::function<double(double)>& u0, const KdvConfig& config);

/// Integrating-factor RK4 for u_t + 6 u u_x + eps^2 u_xxx = 0; throws
/// InstabilityError when mass or momentum drift exceeds 1e-6.
KdvField evolve(const KdvField& field, double t_target);

/// Trigonometric interpolation of the field at x.
double sample(const KdvField& field, double x);
std::vector<double> sample(const KdvField& field, const std::vector<double>& xs);

/// Reruns the evolution from `start` with halved dt until both drifts fall
/// below `drift_tol`; gives up below dt = 1e-8.
KdvField evolve_converged(const KdvField& start, double t_target, double drift_tol = 1e-8);

}  // namespace breakup
