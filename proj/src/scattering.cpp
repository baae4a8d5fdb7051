#include "breakup/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "breakup/errors.hpp"
#include "breakup/fit.hpp"

namespace breakup {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

Complex log_gamma_right(Complex z) {
  z -= 1.0;
  Complex series = kLanczos[0];
  for (int i = 1; i < 9; ++i) series += kLanczos[i] / (z + double(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(series);
}

// log sin(pi z) modulo 2 pi i, without overflow for large |Im z|.
Complex log_sin_pi(Complex z) {
  const Complex I(0.0, 1.0);
  if (z.imag() == 0.0) return std::log(Complex(std::sin(kPi * z.real()), 0.0));
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  // sin(pi z) = e^{-i pi z} (1 - e^{2 i pi z}) i / 2 with |e^{2 i pi z}| < 1.
  return -I * kPi * z + std::log(1.0 - std::exp(2.0 * I * kPi * z)) + Complex(-std::log(2.0), 0.5 * kPi);
}

}  // namespace

Complex log_gamma(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleError("Gamma has a pole at a nonpositive integer");
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
  return log_gamma_right(z);
}

Complex gamma_complex(Complex z) { return std::exp(log_gamma(z)); }

Complex n_function(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) throw BranchError("n_function: z on (-inf, 0]");
  return std::exp(0.5 * std::log(2.0 * kPi) - log_gamma(0.5 + z) + z * (std::log(z) - 1.0));
}

namespace {

struct Sech2Args {
  Complex k, s;
};

Sech2Args sech2_args(double lambda, double eps) {
  if (!(lambda < 0.0)) throw DomainError("reflection requires lambda < 0");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("reflection requires 0 < eps <= 1");
  const Complex I(0.0, 1.0);
  return {I * std::sqrt(-lambda) / eps, -0.5 + I * std::sqrt(1.0 - 0.25 * eps * eps) / eps};
}

}  // namespace

Complex exact_reflection_sech2(double lambda, double eps) {
  const auto [k, s] = sech2_args(lambda, eps);
  return std::exp(log_gamma(k - s) + log_gamma(k + s + 1.0) + log_gamma(-k) -
                  log_gamma(s + 1.0) - log_gamma(-s) - log_gamma(k));
}

Complex exact_transmission_sech2(double lambda, double eps) {
  const auto [k, s] = sech2_args(lambda, eps);
  return std::exp(log_gamma(k - s) + log_gamma(k + s + 1.0) - log_gamma(k + 1.0) - log_gamma(k));
}

ReflectionEval evaluate_reflection(const PhaseContext& ctx, double lambda, double eps) {
  if (ctx.profile().name != "sech2")
    throw DomainError("exact reflection data exist only for the sech2 profile");
  if (!(lambda > -1.0 && lambda < 0.0)) throw DomainError("evaluate_reflection requires -1 < lambda < 0");
  const auto [k, s] = sech2_args(lambda, eps);
  ReflectionEval e;
  e.lambda = lambda;
  e.eps = eps;
  const Complex log_t = log_gamma(k - s) + log_gamma(k + s + 1.0) - log_gamma(k + 1.0) - log_gamma(k);
  e.r = exact_reflection_sech2(lambda, eps);
  e.transmission = std::exp(log_t);
  e.rho = ctx.rho(lambda);
  e.tau = ctx.tau(lambda);
  e.kappa = Complex(0.0, -1.0) * e.r * std::exp(Complex(0.0, 2.0 * e.rho / eps));
  const double r2 = std::norm(e.r);
  e.unitarity_residual = r2 + std::norm(e.transmission) - 1.0;
  // |t|^2 stands in for 1 - |r|^2, which cancels catastrophically here.
  e.tunneling_residual = std::expm1(2.0 * log_t.real() + 2.0 * e.tau / eps);
  return e;
}

WkbRateReport wkb_validation(const PhaseContext& ctx, std::span<const double> lambdas,
                             std::span<const double> eps_list) {
  WkbRateReport rep;
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> eps_sorted(eps_list.begin(), eps_list.end());
  std::sort(eps_sorted.begin(), eps_sorted.end());
  for (double lam : sorted)
    for (double e : eps_sorted) rep.samples.push_back(evaluate_reflection(ctx, lam, e));
  std::vector<double> xs, ys;
  for (double e : eps_list) {
    WkbRateRow row;
    row.eps = e;
    for (const auto& s : rep.samples) {
      if (s.eps != e) continue;
      row.max_kappa_minus_one = std::max(row.max_kappa_minus_one, std::abs(s.kappa - 1.0));
      row.max_abs_kappa = std::max(row.max_abs_kappa, std::abs(s.kappa));
      row.max_tunneling_residual = std::max(row.max_tunneling_residual, std::abs(s.tunneling_residual));
    }
    rep.rows.push_back(row);
    xs.push_back(e);
    ys.push_back(row.max_kappa_minus_one);
  }
  if (xs.size() >= 2) rep.kappa_slope = loglog_slope(xs, ys);
  // Trend check in order of decreasing eps.
  std::vector<WkbRateRow> by_eps = rep.rows;
  std::sort(by_eps.begin(), by_eps.end(), [](const auto& a, const auto& b) { return a.eps > b.eps; });
  rep.tunneling_monotone = true;
  for (std::size_t i = 1; i < by_eps.size(); ++i)
    if (!(by_eps[i].max_tunneling_residual < by_eps[i - 1].max_tunneling_residual))
      rep.tunneling_monotone = false;
  return rep;
}

}  // namespace breakup
