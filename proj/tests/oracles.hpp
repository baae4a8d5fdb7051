#pragma once
// Independent reference values used only by the tests.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/numeric/odeint.hpp>

namespace oracle {

using Complex = std::complex<double>;

// sech^2 bump u0 = -sech^2 x: catastrophe data from f_-(u) = -artanh sqrt(1 + u).
inline double t_c() { return std::sqrt(3.0) / 8.0; }
inline double u_c() { return -2.0 / 3.0; }
inline double xi_c() { return -std::atanh(1.0 / std::sqrt(3.0)); }
inline double x_c() { return -std::sqrt(3.0) / 2.0 - std::atanh(1.0 / std::sqrt(3.0)); }
inline double k() { return 81.0 * std::sqrt(3.0) / 16.0; }

inline double f_minus(double u) { return -std::atanh(std::sqrt(1.0 + u)); }
// d/du of -artanh(sqrt(1+u)) = 1 / (2 u sqrt(1+u)).
inline double f_minus_prime(double u) { return 1.0 / (2.0 * u * std::sqrt(1.0 + u)); }

// Higher derivatives of f_-, differentiated by hand.
inline double f_minus_second(double u) {
  const double s = 1.0 + u;
  return -0.5 / (u * u * std::sqrt(s)) - 0.25 / (u * s * std::sqrt(s));
}
inline double f_minus_third(double u) {
  const double s = 1.0 + u;
  return 0.5 * (2.0 / (u * u * u * std::sqrt(s)) + 1.0 / (u * u * s * std::sqrt(s)) +
                0.75 / (u * s * s * std::sqrt(s)));
}

inline double tau_closed(double lambda) { return std::numbers::pi * (1.0 - std::sqrt(-lambda)); }

// rho from its x-space form: x_- sqrt(-lambda) + int_{-inf}^{x_-} (sqrt(u0 - lambda) - sqrt(-lambda)) dx.
inline double rho_x_space(double lambda) {
  const double m = std::sqrt(-lambda);
  const double x_minus = -std::acosh(1.0 / m);
  auto f = [&](double x) {
    const double c = 1.0 / std::cosh(x);
    const double d = -c * c - lambda;
    return d > 0.0 ? std::sqrt(d) - m : -m;
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return x_minus * m + ts.integrate(f, -std::numeric_limits<double>::infinity(), x_minus);
}

// Reflection coefficient from direct integration of eps^2 f'' = (lambda - u0) f.
// Starts from the pure transmitted wave e^{-iqx} at x = +R and splits the
// solution at x = -R into e^{-iqx} and e^{iqx}; r is their ratio.
inline Complex ode_reflection(double lambda, double eps, double R = 30.0) {
  using State = std::array<double, 4>;  // Re f, Im f, Re f', Im f'
  const double q = std::sqrt(-lambda) / eps;
  auto rhs = [&](const State& s, State& d, double x) {
    const double c = 1.0 / std::cosh(x);
    const double w = (lambda + c * c) / (eps * eps);
    d = {s[2], s[3], w * s[0], w * s[1]};
  };
  const Complex I(0.0, 1.0);
  const Complex f0 = std::exp(-I * q * R), g0 = -I * q * f0;
  State s = {f0.real(), f0.imag(), g0.real(), g0.imag()};
  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<State>());
  ode::integrate_adaptive(stepper, rhs, s, R, -R, -1e-3);
  const Complex f(s[0], s[1]), g(s[2], s[3]);
  const Complex em = std::exp(-I * q * -R), ep = std::exp(I * q * -R);
  // f = A em + B ep, g = -iq A em + iq B ep.
  const Complex A = (f - g / (I * q)) / (2.0 * em);
  const Complex B = (f + g / (I * q)) / (2.0 * ep);
  return B / A;
}

}  // namespace oracle
