#include <doctest.h>

#include <cmath>

#include "breakup/errors.hpp"
#include "breakup/profile.hpp"
#include "oracles.hpp"

using namespace breakup;

TEST_CASE("sech2 catastrophe matches closed forms") {
  const auto p = sech2_profile();
  const auto c = locate_catastrophe(p);
  CHECK(c.t_c == doctest::Approx(oracle::t_c()).epsilon(1e-12));
  CHECK(std::abs(c.u_c - oracle::u_c()) < 1e-9);
  CHECK(std::abs(c.xi_c - oracle::xi_c()) < 1e-9);
  CHECK(std::abs(c.x_c - oracle::x_c()) < 1e-9);
  CHECK(std::abs(c.k - oracle::k()) < 1e-9);
  CHECK_NOTHROW(check_catastrophe(p, c));
}

TEST_CASE("catastrophe relations hold for the asymmetric bump") {
  const auto p = double_gaussian_profile();
  CHECK_NOTHROW(validate_profile(p));
  const auto c = locate_catastrophe(p);
  CHECK_NOTHROW(check_catastrophe(p, c));
  CHECK(std::abs(p.d2u0(c.xi_c)) < 1e-8);
  CHECK(c.t_c * -6.0 * p.du0(c.xi_c) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.x_c == doctest::Approx(6.0 * c.t_c * c.u_c + c.xi_c).epsilon(1e-12));
  CHECK(c.k > 1e-8);
}

TEST_CASE("inverse branches invert u0 on both flanks") {
  for (const auto& name : profile_names()) {
    const auto p = profile_by_name(name);
    double worst = 0.0;
    for (int i = 1; i < 200; ++i) {
      const double u = -1.0 + i / 200.0;
      for (auto b : {Branch::minus, Branch::plus}) {
        const double x = inverse_branch(p, u, b);
        worst = std::max(worst, std::abs(p.u0(x) - u));
        CHECK((b == Branch::minus ? x < p.x_min : x > p.x_min));
      }
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("inverse branch far in the tail") {
  const auto p = sech2_profile();
  for (double u : {-1e-6, -1e-12, -1e-30}) {
    const double exact = -std::acosh(1.0 / std::sqrt(-u));
    CHECK(inverse_branch(p, u, Branch::minus) == doctest::Approx(exact).epsilon(1e-13));
  }
  CHECK_THROWS_AS(inverse_branch(p, 0.0, Branch::minus), DomainError);
  CHECK_THROWS_AS(inverse_branch(p, -1.5, Branch::plus), DomainError);
}

TEST_CASE("f_- derivatives agree with the closed form and with finite differences") {
  const auto p = sech2_profile();
  for (double u : {-0.99, -0.9, -0.7, -0.5, -0.2, -0.01}) {
    CHECK(f_minus_derivative(p, u, 1) == doctest::Approx(oracle::f_minus_prime(u)).epsilon(1e-10));
    CHECK(f_minus_derivative(p, u, 2) == doctest::Approx(oracle::f_minus_second(u)).epsilon(1e-10));
    CHECK(f_minus_derivative(p, u, 3) == doctest::Approx(oracle::f_minus_third(u)).epsilon(1e-10));
  }
  // Away from the singularities at u = -1 and u = 0 the step-1e-4 difference is accurate to 1e-6.
  for (double u : {-0.8, -0.7, -0.5, -0.3}) {
    for (int n = 2; n <= 3; ++n) {
      const double h = 1e-4;
      const double fd = (f_minus_derivative(p, u + h, n - 1) - f_minus_derivative(p, u - h, n - 1)) / (2 * h);
      CHECK(f_minus_derivative(p, u, n) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("unknown profile names are rejected") {
  CHECK_THROWS_AS(profile_by_name("triangle"), ConfigError);
}
