#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "breakup/errors.hpp"
#include "breakup/kdv.hpp"

using namespace breakup;

namespace {

const InitialProfile P = sech2_profile();
const CatastrophePoint C = locate_catastrophe(P);

KdvConfig config_for(double eps, int N = 0) {
  KdvConfig c;
  c.eps = eps;
  c.N = N > 0 ? N : default_modes(eps);
  c.dt = default_dt(c.L_d, c.N, eps);
  return c;
}

double sup_gap(const KdvField& a, const KdvField& b, double half) {
  std::vector<double> xs;
  for (int i = 0; i <= 300; ++i) xs.push_back(-half + 2 * half * (i + 0.37) / 301);
  const auto ua = sample(a, xs), ub = sample(b, xs);
  double w = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) w = std::max(w, std::abs(ua[i] - ub[i]));
  return w;
}

}  // namespace

TEST_CASE("initial field") {
  const auto f = init_field(P, config_for(0.1));
  CHECK(f.u[f.config.N / 2] == doctest::Approx(-1.0).epsilon(1e-15));
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double x) { return P.u0(x); }, -15.0, 15.0, 20, 1e-15);
  CHECK(f.mass() == doctest::Approx(ref).epsilon(1e-10));
  for (double x : {-2.3456, -0.1234, 0.5, 1.777}) CHECK(std::abs(sample(f, x) - P.u0(x)) < 1e-10);
  for (int i : {0, 100, 2048, 3000}) CHECK(sample(f, f.x(i)) == doctest::Approx(f.u[i]).epsilon(1e-12));
  CHECK_THROWS_AS(sample(f, 16.0), RangeError);
}

TEST_CASE("configuration checks") {
  KdvConfig c = config_for(0.1);
  c.L_d = 5.0;
  CHECK_THROWS_AS(init_field(P, c), ConfigError);
  c = config_for(0.1);
  c.N = 3000;
  CHECK_THROWS_AS(init_field(P, c), ConfigError);
  c.N = 2048;
  CHECK_THROWS_AS(init_field(P, c), ConfigError);
}

TEST_CASE("evolve to the current time is the identity") {
  const auto f = init_field(P, config_for(0.1));
  const auto g = evolve(f, 0.0);
  CHECK(g.u == f.u);
  const auto h = evolve(f, 0.01);
  CHECK_THROWS_AS(evolve(h, 0.005), DomainError);
}

TEST_CASE("soliton over a quarter period") {
  const double c = 1.0, eps = 0.1;
  auto wave = [&](double x, double t) {
    const double s = 1.0 / std::cosh(std::sqrt(c) * (x - c * t) / (2 * eps));
    return 0.5 * c * s * s;
  };
  KdvConfig cfg;
  cfg.L_d = 5.0;
  cfg.N = 4096;
  cfg.eps = eps;
  cfg.dt = default_dt(cfg.L_d, cfg.N, eps);
  const auto f0 = init_field([&](double x) { return wave(x, 0.0); }, cfg);
  const auto f = evolve(f0, 2.5);
  double w = 0.0;
  for (int i = 0; i < cfg.N; ++i) w = std::max(w, std::abs(f.u[i] - wave(f.x(i), 2.5)));
  CHECK(w < 1e-6);
  CHECK(f.mass_drift() < 1e-8);
  CHECK(f.momentum_drift() < 1e-8);
}

TEST_CASE("two resolutions agree before breaking") {
  const double t = C.t_c / 2;
  const auto a = evolve_converged(init_field(P, config_for(0.1)), t);
  const auto b = evolve_converged(init_field(P, config_for(0.1, 8192)), t);
  CHECK(sup_gap(a, b, 5.0) < 1e-6);
  CHECK(a.mass_drift() < 1e-8);
  CHECK(a.momentum_drift() < 1e-8);
}

TEST_CASE("resolution independence at the breaking time") {
  for (double eps : {0.1, 0.035}) {
    auto base = config_for(eps);
    auto fine = base;
    fine.N *= 2;
    fine.dt /= 2;
    const auto a = evolve_converged(init_field(P, base), C.t_c);
    const auto b = evolve_converged(init_field(P, fine), C.t_c);
    CHECK_MESSAGE(sup_gap(a, b, 5.0) < 1e-5, "eps=" << eps);
    CHECK(std::max(a.mass_drift(), a.momentum_drift()) < 1e-8);
  }
}

TEST_CASE("mode and step policy") {
  CHECK(default_modes(0.1) == 4096);
  CHECK(default_modes(0.05) == 8192);
  CHECK(default_modes(0.035) == 16384);
  CHECK(default_dt(15.0, 4096, 0.1) == doctest::Approx(15.0 / 4096 / 25.6));
}
