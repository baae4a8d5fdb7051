#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>

#include "breakup/errors.hpp"
#include "breakup/scattering.hpp"
#include "oracles.hpp"

using namespace breakup;

namespace {
const PhaseContext& context() {
  static const PhaseContext ctx = [] {
    const auto p = sech2_profile();
    return PhaseContext(p, locate_catastrophe(p));
  }();
  return ctx;
}
}  // namespace

TEST_CASE("Gamma recurrence on random complex samples") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> re(-8.0, 8.0), im(-30.0, 30.0);
  for (int i = 0; i < 200; ++i) {
    const Complex z(re(gen), im(gen));
    const Complex lhs = log_gamma(z + 1.0), rhs = log_gamma(z) + std::log(z);
    // Equal modulo 2 pi i.
    const double d = std::abs(std::exp(lhs - rhs) - 1.0);
    CHECK(d < 1e-11);
  }
}

TEST_CASE("Gamma on the real axis agrees with Boost") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 20.0, -0.5, -2.7}) {
    const double ref = boost::math::tgamma(x);
    CHECK(gamma_complex(Complex(x, 0.0)).real() == doctest::Approx(ref).epsilon(1e-13));
  }
  CHECK(gamma_complex(0.5).real() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK_THROWS_AS(log_gamma(Complex(-3.0, 0.0)), PoleError);
}

TEST_CASE("N function limits") {
  CHECK(std::abs(n_function(1e-14).real() - std::sqrt(2.0)) < 1e-10);
  CHECK(std::abs(n_function(1.0) - 2.0 * std::sqrt(2.0) / std::numbers::e) < 1e-10);
  CHECK_THROWS_AS(n_function(-0.5), BranchError);
  // Off the cut there is no blow-up.
  for (Complex z : {Complex(-3.0, 0.1), Complex(-0.5, -1e-3), Complex(10.0, 10.0)}) {
    CHECK(std::isfinite(std::abs(n_function(z))));
  }
}

TEST_CASE("exact reflection agrees with direct ODE integration") {
  const std::pair<double, double> samples[] = {{-0.9, 0.1},  {-0.7, 0.1},   {-0.5, 0.05}, {-0.3, 0.05},
                                               {-0.1, 0.1},  {-0.8, 0.025}, {-0.2, 0.025}, {-0.6, 0.07},
                                               {-0.95, 0.2}, {-0.4, 0.5}};
  for (auto [lam, eps] : samples) {
    const Complex ref = oracle::ode_reflection(lam, eps);
    const Complex r = exact_reflection_sech2(lam, eps);
    CHECK(std::abs(r - ref) / std::abs(ref) < 1e-6);
  }
}

TEST_CASE("reflection decays for large negative lambda") {
  CHECK(std::abs(exact_reflection_sech2(-25.0, 0.1)) < 1e-8);
  CHECK_THROWS_AS(exact_reflection_sech2(0.1, 0.1), DomainError);
}

TEST_CASE("WKB rate, boundedness and unitarity") {
  std::vector<double> lambdas;
  for (int i = 0; i < 9; ++i) lambdas.push_back(-0.9 + 0.1 * i);
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  const auto rep = wkb_validation(context(), lambdas, eps);
  CHECK(std::abs(rep.kappa_slope - 1.0) <= 0.2);
  CHECK(rep.tunneling_monotone);
  for (const auto& row : rep.rows) CHECK(row.max_abs_kappa < 2.0);
  for (const auto& s : rep.samples) CHECK(std::abs(s.unitarity_residual) < 1e-10);
  for (std::size_t i = 1; i < rep.samples.size(); ++i) {
    const auto& a = rep.samples[i - 1];
    const auto& b = rep.samples[i];
    CHECK((a.lambda < b.lambda || (a.lambda == b.lambda && a.eps < b.eps)));
  }
}
