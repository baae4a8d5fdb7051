#include <doctest.h>

#include <cmath>

#include "breakup/errors.hpp"
#include "breakup/harness.hpp"

using namespace breakup;

namespace {
const InitialProfile P = sech2_profile();
const CatastrophePoint C = locate_catastrophe(P);
}  // namespace

TEST_CASE("scaling exponents") {
  const ScalingMap m{C};
  const double e1 = 0.1, e2 = 0.05;
  CHECK(m.x_scale(e1) / m.x_scale(e2) == doctest::Approx(std::pow(2.0, 6.0 / 7)).epsilon(1e-14));
  CHECK(m.t_scale(e1) / m.t_scale(e2) == doctest::Approx(std::pow(2.0, 4.0 / 7)).epsilon(1e-14));
  CHECK(m.amplitude(e1) / m.amplitude(e2) == doctest::Approx(std::pow(2.0, 2.0 / 7)).epsilon(1e-14));
  CHECK(m.t(0.0, e1) == C.t_c);
  CHECK(m.x(0.0, 0.0, e1) == C.x_c);
  CHECK(m.x(0.0, 1.0, e1) == doctest::Approx(C.x_c + 6 * C.u_c * m.t_scale(e1)));
}

TEST_CASE("X window") {
  const auto X = x_window(2.0, 41);
  CHECK(X.size() == 41);
  CHECK(X.front() == -2.0);
  CHECK(X[20] == 0.0);
  CHECK(X.back() == 2.0);
  CHECK_THROWS_AS(x_window(2.0, 1), DomainError);
}

TEST_CASE("Hopf validation before breaking") {
  auto provider = direct_kdv_provider(P);
  const auto one = hopf_validation(P, C, {0.1}, C.t_c / 2, provider);
  CHECK(one.rows.size() == 1);
  const auto table = hopf_validation(P, C, {0.1, 0.05}, C.t_c / 2, provider);
  CHECK(table.monotone);
  CHECK(table.rows[1].error < table.rows[0].error);
  REQUIRE(table.slope);
  CHECK(std::abs(*table.slope - 2.0) <= 0.5);
  CHECK_THROWS_AS(hopf_validation(P, C, {0.1}, 0.95 * C.t_c, provider), DomainError);
}

TEST_CASE("comparison is deterministic and records failures per row") {
  const auto fam = continuation_in_T(Pi2Grid::with_spacing(25.0, 0.05), {0.0});
  const std::vector<double> eps = {0.1, 0.07, 0.05};
  const auto X = x_window(2.0, 21);
  const auto a = report_csv(universality_compare(P, C, fam, eps, {0.0}, X, direct_kdv_provider(P)));
  const auto b = report_csv(universality_compare(P, C, fam, eps, {0.0}, X, direct_kdv_provider(P)));
  CHECK(a == b);
  CHECK(a.rfind("eps,T,sup_error\n", 0) == 0);
  CHECK(a.find("slope=") != std::string::npos);
  CHECK(a.find("target=0.5714") != std::string::npos);

  const auto rep = universality_compare(P, C, fam, eps, {0.0, 1.0}, X, direct_kdv_provider(P));
  int failed = 0;
  for (const auto& r : rep.rows) failed += r.failure.empty() ? 0 : 1;
  CHECK(failed == 3);
  CHECK_FALSE(rep.slope.has_value());
  CHECK(rep.profiles.size() == 3);
}
