#pragma once

#include <complex>
#include <span>
#include <vector>

#include "breakup/phase.hpp"

namespace breakup {

/// log Gamma(z) modulo 2 pi i; Lanczos (g = 7, n = 9) with reflection.
Complex log_gamma(Complex z);
Complex gamma_complex(Complex z);
/// sqrt(2 pi) / Gamma(1/2 + z) * exp(z (log z - 1)), principal log.
Complex n_function(Complex z);

/// Reflection coefficient of eps^2 f'' + u0 f = lambda f with u0 = -sech^2 x.
Complex exact_reflection_sech2(double lambda, double eps);
/// Transmission coefficient 1/a for the same potential.
Complex exact_transmission_sech2(double lambda, double eps);

struct ReflectionEval {
  double lambda = 0.0;
  double eps = 0.0;
  Complex r;
  Complex transmission;
  Complex kappa;
  double tau = 0.0;
  double rho = 0.0;
  double unitarity_residual = 0.0;  // |r|^2 + |t|^2 - 1
  double tunneling_residual = 0.0;  // (1 - |r|^2) e^{2 tau / eps} - 1
};

/// Requires a PhaseContext built on the sech2 profile.
ReflectionEval evaluate_reflection(const PhaseContext& ctx, double lambda, double eps);

struct WkbRateRow {
  double eps = 0.0;
  double max_kappa_minus_one = 0.0;
  double max_abs_kappa = 0.0;
  double max_tunneling_residual = 0.0;
};

struct WkbRateReport {
  std::vector<ReflectionEval> samples;  // sorted by lambda, then eps
  std::vector<WkbRateRow> rows;         // in the order of the eps list
  double kappa_slope = 0.0;
  bool tunneling_monotone = false;
};

WkbRateReport wkb_validation(const PhaseContext& ctx, std::span<const double> lambdas,
                             std::span<const double> eps_list);

}  // namespace breakup
