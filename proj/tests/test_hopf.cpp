#include <doctest.h>

#include <cmath>

#include "breakup/errors.hpp"
#include "breakup/hopf.hpp"

using namespace breakup;

namespace {
const InitialProfile P = sech2_profile();
const CatastrophePoint C = locate_catastrophe(P);
}  // namespace

TEST_CASE("t = 0 is the identity") {
  for (double x : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
    const auto s = solve_characteristic(P, C, x, 0.0);
    CHECK(s.u == doctest::Approx(P.u0(x)).epsilon(1e-14));
    CHECK(s.foot == doctest::Approx(x).epsilon(1e-14));
  }
}

TEST_CASE("catastrophe point") {
  const auto s = solve_characteristic(P, C, C.x_c, C.t_c);
  CHECK(std::abs(s.u - C.u_c) < 1e-12);
  CHECK(std::abs(s.foot - C.xi_c) < 1e-12);
  // The decreasing flank steepens, so the slope blows up to -infinity.
  CHECK(std::isinf(s.ux));
  CHECK(s.ux < 0.0);
  const auto near = solve_characteristic(P, C, C.x_c + 1e-13, C.t_c);
  CHECK(std::abs(near.x - 6 * C.t_c * P.u0(near.foot) - near.foot) < 1e-14);
  CHECK(near.foot > C.xi_c);
}

TEST_CASE("characteristic built forward") {
  const double t = C.t_c / 2, x = 6 * t * P.u0(-1.0) - 1.0;
  const auto s = solve_characteristic(P, C, x, t);
  CHECK(s.u == doctest::Approx(P.u0(-1.0)).epsilon(1e-12));
}

TEST_CASE("samples satisfy the characteristic relation before breaking") {
  CharacteristicSolver solver(P, C);
  for (double t : {0.3 * C.t_c, 0.9 * C.t_c, 0.999 * C.t_c}) {
    for (int i = 0; i <= 300; ++i) {
      const double x = -4.0 + 8.0 * i / 300;
      const auto s = solver.solve(x, t);
      CHECK(std::abs(x - 6 * t * P.u0(s.foot) - s.foot) < 1e-10);
      CHECK(s.u == P.u0(s.foot));
      const double d = P.du0(s.foot);
      CHECK(1.0 + 6 * t * d > 0.0);
      CHECK(s.ux == doctest::Approx(d / (1.0 + 6 * t * d)).epsilon(1e-9));
    }
  }
}

TEST_CASE("1/ux vanishes along the approach to the catastrophe") {
  double last = 1e300;
  for (double dt : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4}) {
    const double t = C.t_c - dt, x = C.x_c + 6 * C.u_c * (t - C.t_c);
    const double inv = 1.0 / solve_characteristic(P, C, x, t).ux;
    CHECK(inv < 0.0);
    CHECK(std::abs(inv) < last);
    last = std::abs(inv);
  }
  CHECK(last < 1e-3);
}

TEST_CASE("times past breaking are rejected") {
  CHECK_THROWS_AS(solve_characteristic(P, C, 0.0, 1.01 * C.t_c), RangeError);
  CHECK_THROWS_AS(solve_characteristic(P, C, 0.0, -0.1), RangeError);
}
