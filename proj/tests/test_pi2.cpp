#include <doctest.h>

#include <cmath>

#include "breakup/errors.hpp"
#include "breakup/pi2.hpp"

using namespace breakup;

namespace {

double window_gap(const Pi2Solution& a, const Pi2Solution& b, double half) {
  double w = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double X = -half + 2 * half * i / 400;
    w = std::max(w, std::abs(evaluate(a, X) - evaluate(b, X)));
  }
  return w;
}

Pi2Solution solve_at(double L, double h, double T) {
  const auto g = Pi2Grid::with_spacing(L, h);
  return newton_solve(g, T, initial_guess(g, T));
}

}  // namespace

TEST_CASE("grid") {
  const Pi2Grid g(10.0, 11);
  CHECK(g.h == doctest::Approx(2.0));
  CHECK(g.X.front() == -10.0);
  CHECK(g.X.back() == 10.0);
  CHECK(Pi2Grid::with_spacing(25.0, 0.025).n == 2001);
}

TEST_CASE("asymptotic series") {
  const auto [U, UX] = asymptotic_boundary(-1000.0, 0.0);
  CHECK(U > 0.0);
  CHECK(UX < 0.0);
  CHECK_THROWS_AS(asymptotic_boundary(5.0, 0.0), RangeError);
  Pi2Solution s = solve_at(20.0, 0.05, 0.0);
  CHECK(evaluate_extended(s, 1000.0) == doctest::Approx(-18.1712).epsilon(1e-5));
  CHECK_THROWS_AS(evaluate(s, 21.0), RangeError);
}

TEST_CASE("initial guess") {
  const Pi2Grid g(6.0, 121);
  const auto U = initial_guess(g, 0.0);
  CHECK(U.front() == doctest::Approx(std::cbrt(36.0)).epsilon(1e-12));
  const auto V = initial_guess(Pi2Grid(20.0, 401), -1.0);
  for (std::size_t i = 1; i < V.size(); ++i) CHECK(V[i] < V[i - 1]);
}

TEST_CASE("residual of zero is -X") {
  const Pi2Grid g(12.0, 241);
  const auto F = pi2_residual(g, 0.3, std::vector<double>(g.n, 0.0));
  for (int i = 2; i < g.n - 2; ++i) CHECK(F[i] == doctest::Approx(-g.X[i]).epsilon(1e-14));
}

TEST_CASE("T = 0 solution: residual, truncation and envelope") {
  const auto s20 = solve_at(20.0, 0.025, 0.0);
  const auto s30 = solve_at(30.0, 0.025, 0.0);
  CHECK(s20.residual <= 1e-9);
  CHECK(s30.residual <= 1e-9);
  CHECK(window_gap(s20, s30, 5.0) < 1e-4);
  for (std::size_t i = 0; i < s20.U.size(); ++i) {
    const double bound = std::cbrt(6 * std::abs(s20.grid.X[i]));
    CHECK(s20.U[i] >= -bound - 1.0);
    CHECK(s20.U[i] <= bound + 1.0);
  }
  for (std::size_t i = 0; i < s20.U.size(); i += 37) CHECK(evaluate(s20, s20.grid.X[i]) == s20.U[i]);
}

TEST_CASE("grid refinement converges at fourth order") {
  const auto a = solve_at(25.0, 0.025, 0.0);
  const auto b = solve_at(25.0, 0.0125, 0.0);
  const auto c = solve_at(25.0, 0.05, 0.0);
  const double fine = window_gap(a, b, 5.0), coarse = window_gap(c, a, 5.0);
  CHECK(coarse / fine > 12.0);
  const auto d = solve_at(25.0, 0.00625, 0.0);
  CHECK(window_gap(b, d, 5.0) < 1e-6);
}

TEST_CASE("solution approaches the two-term series at large |X|") {
  const auto s = solve_at(40.0, 0.05, 0.0);
  for (double sign : {-1.0, 1.0}) {
    double last = 1e300;
    for (double X : {10.0, 15.0, 20.0, 30.0}) {
      const double gap = std::abs(evaluate(s, sign * X) - asymptotic_boundary(sign * X, 0.0).first);
      CHECK(gap < last);
      CHECK(gap * X < 1.0);
      last = gap;
    }
  }
}

TEST_CASE("continuation over a ladder") {
  const auto fam = continuation_in_T(Pi2Grid::with_spacing(25.0, 0.025), {-1, -0.5, 0, 0.5, 1});
  for (double T : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    REQUIRE(fam.contains(T));
    const auto& m = fam.at(T);
    CHECK(m.iterations <= 15);
    CHECK(m.residual <= 1e-9);
    double mx = 0.0;
    for (double u : m.U) mx = std::max(mx, std::abs(u));
    CHECK(mx <= std::cbrt(6 * 25.0) + 2.0);
  }
  CHECK_THROWS_AS(fam.at(0.3), RangeError);
  for (std::size_t i = 1; i < fam.members.size(); ++i) CHECK(fam.members[i].T > fam.members[i - 1].T);
}

TEST_CASE("single-member ladder") {
  const auto fam = continuation_in_T(Pi2Grid(20.0, 401), {0.0});
  CHECK(fam.members.size() == 1);
}

TEST_CASE("members vary linearly in T") {
  const auto g = Pi2Grid::with_spacing(20.0, 0.05);
  const auto base = newton_solve(g, 0.0, initial_guess(g, 0.0));
  double last_ratio = 0.0;
  for (double dT : {0.1, 0.05, 0.025}) {
    const auto m = newton_solve(g, dT, base.U);
    double d = 0.0;
    for (int i = 0; i < g.n; ++i) d = std::max(d, std::abs(m.U[i] - base.U[i]));
    const double ratio = d / dT;
    if (last_ratio > 0.0) CHECK(ratio == doctest::Approx(last_ratio).epsilon(0.2));
    last_ratio = ratio;
  }
}

TEST_CASE("crosscheck: spacing, constant families, refinement") {
  const auto g = Pi2Grid::with_spacing(20.0, 0.05);
  const auto fam = continuation_in_T(g, {-0.1, 0.0, 0.1});
  Pi2Family irregular = fam;
  irregular.members[2].T = 0.3;
  CHECK_THROWS_AS(kdv_crosscheck(irregular), SpacingError);

  // A constant-in-T family leaves only the spatial part U U_X + U_XXX / 12.
  Pi2Family flat = fam;
  for (auto& m : flat.members) m.U = fam.members[1].U;
  const double spatial = kdv_crosscheck(flat);
  CHECK(spatial > 0.1);

  const double coarse = kdv_crosscheck(fam);
  const auto fine = continuation_in_T(Pi2Grid::with_spacing(20.0, 0.025), {-0.05, 0.0, 0.05});
  CHECK(kdv_crosscheck(fine) < coarse / 2);
}
