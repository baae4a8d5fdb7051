#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace breakup {

using Real = double;
using Complex = std::complex<double>;

/// Single-bump initial datum u0 with min u0(x_M) = -1 and u0 -> 0 at infinity.
struct InitialProfile {
  std::string name;
  std::function<double(double)> u0;
  std::function<double(double)> du0;
  std::function<double(double)> d2u0;
  std::function<double(double)> d3u0;
  double x_min = 0.0;
  double decay_half_width = 0.0;
  /// Optional analytic continuations of u0 and u0' (used off the real axis).
  std::function<Complex(Complex)> u0_complex;
  std::function<Complex(Complex)> du0_complex;
};

enum class Branch { minus, plus };

struct CatastrophePoint {
  double x_c = 0.0;
  double t_c = 0.0;
  double u_c = 0.0;
  double xi_c = 0.0;
  double k = 0.0;
};

InitialProfile sech2_profile();
/// Normalized sum of two Gaussians; asymmetric, single minimum.
InitialProfile double_gaussian_profile();
InitialProfile profile_by_name(std::string_view name);
std::vector<std::string> profile_names();

/// Throws InconsistencyError when the profile violates its invariants.
void validate_profile(const InitialProfile& p);

/// x on the requested flank with u0(x) = u, for -1 < u < 0.
double inverse_branch(const InitialProfile& p, double u, Branch branch);

/// d^n f_-/du^n, n = 1..3, by the implicit chain rule.
double f_minus_derivative(const InitialProfile& p, double u, int order);

CatastrophePoint locate_catastrophe(const InitialProfile& p);

/// Throws InconsistencyError unless the catastrophe relations hold.
void check_catastrophe(const InitialProfile& p, const CatastrophePoint& c);

/// f_-'(lambda) continued off the real axis from the decreasing flank,
/// following a path inside the half-plane of lambda.  Real lambda < -1 is
/// taken as the boundary value from above.
Complex f_minus_prime_complex(const InitialProfile& p, Complex lambda);

/// Follows a root x of u0(x) = xi as xi moves along straight segments,
/// with predictor-corrector steps that shrink near branch points.
class InverseContinuation {
 public:
  InverseContinuation(const InitialProfile& p, Complex xi, Complex x);
  Complex move_to(Complex target);
  Complex xi() const { return xi_; }
  Complex x() const { return x_; }
  Complex f_minus_prime() const;

 private:
  const InitialProfile* p_;
  Complex xi_;
  Complex x_;
};

}  // namespace breakup
