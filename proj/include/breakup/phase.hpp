#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "breakup/profile.hpp"
#include "breakup/quadrature.hpp"

namespace breakup {

enum class Side { upper, lower };

/// Phase functions attached to a profile and its catastrophe point.
/// Immutable after construction; rho is cached on the nodes used by G.
class PhaseContext {
 public:
  PhaseContext(InitialProfile profile, CatastrophePoint point);

  const InitialProfile& profile() const { return profile_; }
  const CatastrophePoint& point() const { return point_; }

  double f_minus(double u) const;
  double f_plus(double u) const;
  double rho(double lambda) const;
  double rho_tilde(double lambda) const;
  double tau(double lambda) const;
  static double alpha(double lambda, double x, double t);

  /// G(lambda; x, t).  Real for lambda < u_c; on (u_c, 0) the boundary
  /// value from the requested side, built from the principal value.
  Complex g_function(double lambda, double x, double t, Side side = Side::upper) const;
  /// G at a non-real lambda (or real lambda off [u_c, inf)).
  Complex g_offaxis(Complex lambda, double x, double t) const;
  /// Boundary value of G on the real axis as the limit lambda +- iy, y -> 0.
  Complex g_boundary_limit(double lambda, double x, double t, Side side) const;
  /// Coefficient of (-lambda)^{-1/2} in G as lambda -> infinity.
  double g_infinity_coefficient(double x, double t) const;

  /// Closed form of phi; upper boundary value for lambda in (u_c, 0].
  Complex phi_closed(double lambda, double x, double t) const;
  /// Twice-integrated-by-parts form of phi.
  Complex phi_by_parts(double lambda, double x, double t) const;
  Complex phi_prime(double lambda, double x, double t) const;
  /// phi for non-real lambda, continuing f_-' along the segment to u_c.
  Complex phi_complex(Complex lambda, double x, double t) const;

  /// Integral over s in [0, 1] of (f_-'(lambda + s (u_c - lambda)) + 6t) sqrt(s).
  Complex segment_moment(Complex lambda, double t) const;

 private:
  double f_minus_prime_raw(double u) const;
  double rho_minus_alpha_sum(double x, double t, int level) const;
  Complex g_sum(Complex lambda, double x, double t, int level) const;
  std::vector<Complex> g_split_sums(double lambda_r, double x, double t,
                                    const std::vector<double>& ys) const;
  double pv_integral(double lambda, double x, double t) const;

  // rho on the two-piece rule split at a point of (u_c, 0).
  struct SplitRho {
    double lambda_r = 0.0;
    std::vector<quad::Node> a, b;
    std::vector<double> rho_a, rho_b;
  };
  struct SplitCache;
  std::shared_ptr<const SplitRho> split_rho(double lambda_r) const;

  InitialProfile profile_;
  CatastrophePoint point_;
  double s_max_ = 0.0;
  std::vector<quad::Node> nodes_;
  std::vector<double> rho_nodes_;
  std::shared_ptr<SplitCache> split_cache_;
};

/// Conformal map f and shifts g1, g2 on a disk around u_c.
class LocalMaps {
 public:
  LocalMaps(std::shared_ptr<const PhaseContext> ctx, double x_shift, double t);

  double radius() const { return radius_; }
  double u_c() const { return u_c_; }
  Complex f(Complex lambda) const;
  Complex g1(Complex lambda) const;
  Complex g2(Complex lambda) const;
  /// f(lambda) / (lambda - u_c); analytic with value (8k)^{2/7} at u_c.
  Complex q(Complex lambda) const;

 private:
  void check_range(Complex lambda) const;

  std::shared_ptr<const PhaseContext> ctx_;
  double u_c_;
  double radius_;
  double shift_offset_;  // x~ - x~_c
  double time_offset_;   // t - t_c
  double q0_;
  std::array<double, 3> p_{};  // series coefficients of phi / leading term
};

LocalMaps local_maps(std::shared_ptr<const PhaseContext> ctx, double x_shift, double t);

struct PhiSignLine {
  std::string name;
  bool pass = false;
  double worst_margin = 0.0;
};

struct PhiSignReport {
  std::array<PhiSignLine, 4> lines;
  double rectangle_height = 0.0;
  bool all_pass() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
};

PhiSignReport check_phi_signs(const PhaseContext& ctx, double x, double t,
                              double delta = 0.05);

}  // namespace breakup
