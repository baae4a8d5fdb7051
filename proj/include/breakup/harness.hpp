#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "breakup/kdv.hpp"
#include "breakup/pi2.hpp"
#include "breakup/profile.hpp"

namespace breakup {

/// Double-scaling coordinates around the catastrophe point.
struct ScalingMap {
  CatastrophePoint point;

  double x_scale(double eps) const;  // (8 k eps^6)^(1/7)
  double t_scale(double eps) const;  // (4 k^3 eps^4)^(1/7) / 6
  double amplitude(double eps) const;  // (2 eps^2 / k^2)^(1/7)
  double t(double T, double eps) const;
  double x(double X, double T, double eps) const;
};

struct ComparisonRow {
  double eps = 0.0;
  double T = 0.0;
  double sup_error = 0.0;
  std::string failure;  // empty on success
};

struct RescaledProfile {
  double eps = 0.0;
  std::vector<double> X;
  std::vector<double> rescaled;  // (u - u_c) / a(eps)
  std::vector<double> limit;     // U(X, 0)
  double gap = 0.0;              // max |rescaled - limit|
};

struct ComparisonReport {
  std::vector<double> eps;
  std::vector<ComparisonRow> rows;
  /// Least-squares slope of log(sup over T and X) against log eps; set only
  /// when at least three eps values succeeded for every T.
  std::optional<double> slope;
  std::map<double, double> slope_by_T;
  std::vector<RescaledProfile> profiles;  // T = 0, by decreasing eps
};

/// KdV field for a given eps at time t.
using FieldProvider = std::function<KdvField(double eps, double t)>;

/// Evolves sech2-type data directly, reusing the last field per eps when the
/// requested time is not earlier.  Uses default_modes and default_dt.
FieldProvider direct_kdv_provider(const InitialProfile& profile, double L_d = 15.0);

std::vector<double> x_window(double x_max, int points);

ComparisonReport universality_compare(const InitialProfile& profile, const CatastrophePoint& point,
                                      const Pi2Family& family, const std::vector<double>& eps_ladder,
                                      const std::vector<double>& T_list,
                                      const std::vector<double>& X_window,
                                      const FieldProvider& provider);

/// Report as CSV (eps,T,sup_error) followed by the summary line.
std::string report_csv(const ComparisonReport& report);

struct HopfRow {
  double eps = 0.0;
  double error = 0.0;
};

struct HopfTable {
  double t = 0.0;
  std::vector<HopfRow> rows;
  bool monotone = false;
  std::optional<double> slope;
};

/// Sup over |x| <= 3 of |u_eps - u_hopf| at time t <= 0.9 t_c.
HopfTable hopf_validation(const InitialProfile& profile, const CatastrophePoint& point,
                          const std::vector<double>& eps_ladder, double t,
                          const FieldProvider& provider);

}  // namespace breakup
