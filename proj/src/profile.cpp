#include "breakup/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "breakup/errors.hpp"

namespace breakup {

namespace {

double sech2(double x) {
  const double c = std::cosh(x);
  return 1.0 / (c * c);
}

struct Gaussian {
  double amp, centre, width2;
  double g(double x) const {
    const double y = x - centre;
    return amp * std::exp(-y * y / width2);
  }
  double d1(double x) const { return -2.0 * (x - centre) / width2 * g(x); }
  double d2(double x) const {
    const double y = x - centre;
    return (4.0 * y * y / (width2 * width2) - 2.0 / width2) * g(x);
  }
  double d3(double x) const {
    const double y = x - centre, s = width2;
    return (-8.0 * y * y * y / (s * s * s) + 12.0 * y / (s * s)) * g(x);
  }
  Complex gc(Complex x) const {
    const Complex y = x - centre;
    return amp * std::exp(-y * y / width2);
  }
  Complex d1c(Complex x) const { return -2.0 * (x - centre) / width2 * gc(x); }
};

}  // namespace

InitialProfile sech2_profile() {
  InitialProfile p;
  p.name = "sech2";
  p.u0 = [](double x) { return -sech2(x); };
  p.du0 = [](double x) { return 2.0 * sech2(x) * std::tanh(x); };
  p.d2u0 = [](double x) {
    const double t = std::tanh(x);
    return 2.0 * sech2(x) * (1.0 - 3.0 * t * t);
  };
  p.d3u0 = [](double x) {
    const double t = std::tanh(x);
    return -8.0 * sech2(x) * t * (2.0 - 3.0 * t * t);
  };
  p.x_min = 0.0;
  p.decay_half_width = 15.0;
  p.u0_complex = [](Complex x) {
    const Complex c = std::cosh(x);
    return -1.0 / (c * c);
  };
  p.du0_complex = [](Complex x) {
    const Complex c = std::cosh(x);
    return 2.0 * std::tanh(x) / (c * c);
  };
  return p;
}

InitialProfile double_gaussian_profile() {
  Gaussian a{1.0, 0.0, 1.0};
  Gaussian b{0.5, 1.0, 4.0};
  // Unique critical point of a + b lies in (0, 1).
  double xm = 0.3;
  for (int it = 0; it < 100; ++it) {
    const double step = (a.d1(xm) + b.d1(xm)) / (a.d2(xm) + b.d2(xm));
    xm -= step;
    if (std::abs(step) < 1e-16) break;
  }
  const double norm = a.g(xm) + b.g(xm);
  InitialProfile p;
  p.name = "double-gaussian";
  p.u0 = [=](double x) { return -(a.g(x) + b.g(x)) / norm; };
  p.du0 = [=](double x) { return -(a.d1(x) + b.d1(x)) / norm; };
  p.d2u0 = [=](double x) { return -(a.d2(x) + b.d2(x)) / norm; };
  p.d3u0 = [=](double x) { return -(a.d3(x) + b.d3(x)) / norm; };
  p.x_min = xm;
  p.decay_half_width = 12.5;
  p.u0_complex = [=](Complex x) { return -(a.gc(x) + b.gc(x)) / norm; };
  p.du0_complex = [=](Complex x) { return -(a.d1c(x) + b.d1c(x)) / norm; };
  return p;
}

std::vector<std::string> profile_names() { return {"sech2", "double-gaussian"}; }

InitialProfile profile_by_name(std::string_view name) {
  if (name == "sech2") return sech2_profile();
  if (name == "double-gaussian") return double_gaussian_profile();
  throw ConfigError("unknown profile '" + std::string(name) + "'");
}

void validate_profile(const InitialProfile& p) {
  if (!p.u0 || !p.du0 || !p.d2u0 || !p.d3u0)
    throw InconsistencyError("profile '" + p.name + "' is missing evaluators");
  if (std::abs(p.u0(p.x_min) + 1.0) > 1e-12)
    throw InconsistencyError("profile minimum is not -1");
  if (std::abs(p.du0(p.x_min)) > 1e-10)
    throw InconsistencyError("u0' does not vanish at the minimizer");
  if (!(p.d2u0(p.x_min) > 0.0))
    throw InconsistencyError("minimizer is not a nondegenerate minimum");
  const double W = p.decay_half_width;
  if (!(W > std::abs(p.x_min)))
    throw InconsistencyError("decay half-width does not contain the minimizer");
  if (std::abs(p.u0(-W)) >= 1e-12 || std::abs(p.u0(W)) >= 1e-12)
    throw InconsistencyError("profile has not decayed at the half-width");
  const int n = 4000;
  for (int i = 0; i <= n; ++i) {
    const double x = -W + 2.0 * W * i / n;
    const double u = p.u0(x), d = p.du0(x);
    if (!(u < 0.0) && std::abs(u) > 1e-300)
      throw InconsistencyError("profile is not negative on its support");
    if (std::abs(x - p.x_min) < 1e-6) continue;
    if (x < p.x_min ? d > 0.0 : d < 0.0)
      throw InconsistencyError("profile is not a single bump");
  }
}

double inverse_branch(const InitialProfile& p, double u, Branch branch) {
  if (!(u > -1.0 && u < 0.0))
    throw DomainError("inverse_branch requires -1 < u < 0");
  const double dir = branch == Branch::minus ? -1.0 : 1.0;
  // Bracket [near, far] with u0(near) < u < u0(far).
  double near = p.x_min;
  double dist = 1.0;
  double far = p.x_min + dir * dist;
  while (!(p.u0(far) >= u)) {
    near = far;
    dist *= 2.0;
    far = p.x_min + dir * dist;
    if (dist > 1e6)
      throw InconsistencyError("inverse_branch failed to bracket the root");
  }
  double lo = std::min(near, far), hi = std::max(near, far);
  // Newton on g = log(-u) - log(-u0(x)), nearly linear in exponential tails;
  // g > 0 on the side of the root further from x_M.
  const double target = std::log(-u);
  const bool far_is_hi = dir > 0.0;
  // Quadratic model near the minimum, bracket midpoint otherwise.
  double x = 0.5 * (lo + hi);
  if (u < -0.5) {
    const double guess = p.x_min + dir * std::sqrt(2.0 * (u + 1.0) / p.d2u0(p.x_min));
    if (guess > lo && guess < hi) x = guess;
  }
  for (int it = 0; it < 200; ++it) {
    const double v = p.u0(x);
    if (v == u) return x;
    if (v < 0.0 && std::log(-v) == target) return x;
    const double gx = v < 0.0 ? target - std::log(-v) : -std::numeric_limits<double>::infinity();
    if ((gx > 0.0) == far_is_hi)
      hi = x;
    else
      lo = x;
    const double slope = -p.du0(x) / v;
    double next = 0.5 * (lo + hi);
    if (std::isfinite(gx) && slope != 0.0 && std::isfinite(slope)) {
      const double newton = x - gx / slope;
      if (newton > lo && newton < hi) next = newton;
    }
    const double step = std::abs(next - x);
    x = next;
    const double scale = std::max(1.0, std::abs(x));
    if (step < 1e-15 * scale || hi - lo < 1e-13 * scale) break;
  }
  return x;
}

double f_minus_derivative(const InitialProfile& p, double u, int order) {
  if (order < 1 || order > 3) throw DomainError("order must be 1, 2 or 3");
  const double x = inverse_branch(p, u, Branch::minus);
  const double d1 = p.du0(x);
  if (!(std::abs(d1) > 1e-14))
    throw SingularityError("u0' vanishes at the inverse point");
  if (order == 1) return 1.0 / d1;
  const double d2 = p.d2u0(x);
  if (order == 2) return -d2 / (d1 * d1 * d1);
  const double d3 = p.d3u0(x);
  const double d1sq = d1 * d1;
  return (3.0 * d2 * d2 - d1 * d3) / (d1sq * d1sq * d1);
}

CatastrophePoint locate_catastrophe(const InitialProfile& p) {
  const double W = p.decay_half_width;
  const double a = -W, b = p.x_min;
  const int n = 8000;
  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    const double v = -p.du0(x);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  if (best <= 0 || best >= n)
    throw ShapeError("u0' has no interior extremum on the decreasing flank");
  double lo = a + (b - a) * (best - 1) / n;
  double hi = a + (b - a) * (best + 1) / n;
  if (!(p.d2u0(lo) < 0.0 && p.d2u0(hi) > 0.0))
    throw ShapeError("inflection point is not bracketed");
  double xi = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = p.d2u0(xi);
    if (g == 0.0) break;
    if (g < 0.0)
      lo = xi;
    else
      hi = xi;
    const double slope = p.d3u0(xi);
    double next = slope > 0.0 ? xi - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - xi);
    xi = next;
    if (step < 1e-16 * std::max(1.0, std::abs(xi)) || hi - lo < 1e-15) break;
  }
  CatastrophePoint c;
  const double d1 = p.du0(xi);
  c.xi_c = xi;
  c.t_c = 1.0 / (-6.0 * d1);
  c.u_c = p.u0(xi);
  c.x_c = 6.0 * c.t_c * c.u_c + xi;
  const double d2 = p.d2u0(xi), d3 = p.d3u0(xi);
  const double d1sq = d1 * d1;
  c.k = -(3.0 * d2 * d2 - d1 * d3) / (d1sq * d1sq * d1);
  if (!(c.k > 1e-8)) throw GenericityError("catastrophe is not generic (k <= 1e-8)");
  return c;
}

void check_catastrophe(const InitialProfile& p, const CatastrophePoint& c) {
  if (std::abs(6.0 * c.t_c + f_minus_derivative(p, c.u_c, 1)) > 1e-9)
    throw InconsistencyError("6 t_c + f_-'(u_c) != 0");
  if (std::abs(f_minus_derivative(p, c.u_c, 2)) > 1e-8)
    throw InconsistencyError("f_-''(u_c) != 0");
  if (std::abs(c.x_c - 6.0 * c.t_c * c.u_c - c.xi_c) > 1e-9)
    throw InconsistencyError("x_c != 6 t_c u_c + xi_c");
  if (!(c.k > 0.0)) throw InconsistencyError("k <= 0");
}

InverseContinuation::InverseContinuation(const InitialProfile& p, Complex xi,
                                         Complex x)
    : p_(&p), xi_(xi), x_(x) {
  if (!p.u0_complex || !p.du0_complex)
    throw BranchError("profile '" + p.name + "' has no analytic continuation");
}

Complex InverseContinuation::move_to(Complex target) {
  double h = 0.01;
  while (std::abs(target - xi_) > 0.0) {
    const Complex remaining = target - xi_;
    const double dist = std::abs(remaining);
    const Complex step = dist <= h ? remaining : remaining * (h / dist);
    const Complex predicted_dx = step / p_->du0_complex(x_);
    const Complex xi_next = dist <= h ? target : xi_ + step;
    Complex x = x_ + predicted_dx;
    bool ok = false;
    for (int it = 0; it < 8; ++it) {
      const Complex dx = (p_->u0_complex(x) - xi_next) / p_->du0_complex(x);
      x -= dx;
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) break;
      if (std::abs(dx) <= 1e-14 * (1.0 + std::abs(x))) {
        ok = true;
        break;
      }
    }
    if (ok && std::abs(x - x_) <= 2.0 * std::abs(predicted_dx) + 1e-12) {
      x_ = x;
      xi_ = xi_next;
      h = std::min(0.01, 1.5 * h);
    } else {
      h *= 0.5;
      if (h < 1e-12)
        throw BranchError("analytic continuation of f_- stalled near a branch point");
    }
  }
  return x_;
}

Complex InverseContinuation::f_minus_prime() const {
  return 1.0 / p_->du0_complex(x_);
}

Complex f_minus_prime_complex(const InitialProfile& p, Complex lambda) {
  const double re = lambda.real(), im = lambda.imag();
  if (im == 0.0 && re > -1.0 && re < 0.0) return f_minus_derivative(p, re, 1);
  if (!p.u0_complex || !p.du0_complex)
    throw BranchError("profile '" + p.name + "' has no analytic continuation");
  if (im == 0.0 && re >= 0.0) throw BranchError("f_- has a branch cut on [0, inf)");
  if (im == 0.0 && re == -1.0) throw BranchError("f_-' is singular at -1");
  const double sgn = im < 0.0 ? -1.0 : 1.0;
  const double height = sgn * std::max(std::abs(im), 0.05);
  const double start = -0.5;
  InverseContinuation tracker(p, start, inverse_branch(p, start, Branch::minus));
  tracker.move_to(Complex(start, height));
  tracker.move_to(Complex(re, height));
  tracker.move_to(lambda);
  return tracker.f_minus_prime();
}

}  // namespace breakup
