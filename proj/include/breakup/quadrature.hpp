#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace breakup::quad {

/// Node of a double-exponential rule on [a, b].  `da` and `db` are the
/// distances to the endpoints, kept accurate where x itself rounds onto them.
/// The weight excludes the step 2^-level; `level` is where the node first
/// appears, so coarser sums are available from the same node list.
struct Node {
  double x;
  double da;
  double db;
  double w;
  int level;
};

/// Half-line tanh-sinh abscissae for t = k * 2^-level, k = 0, 1, ...
struct TanhSinhLevel {
  double h;
  std::vector<double> t;
  std::vector<double> abscissa;
  std::vector<double> complement;  // 1 - abscissa
  std::vector<double> weight;
};

constexpr int kMaxLevel = 10;

/// Nodes with t = odd multiples of 2^-level (all multiples at level 0).
const TanhSinhLevel& tanh_sinh_level(int level);

/// Full rule on [a, b] at a fixed level; weights include the Jacobian.
std::vector<Node> tanh_sinh_rule(double a, double b, int level);

/// Sum over the nodes of `rule` present at `level` of w * values[i] * 2^-level.
template <class T>
T rule_sum(const std::vector<Node>& rule, const std::vector<T>& values, int level) {
  T s{};
  for (std::size_t i = 0; i < rule.size(); ++i)
    if (rule[i].level <= level) s += rule[i].w * values[i];
  return s * std::ldexp(1.0, -level);
}

struct Options {
  double rel_tol = 1e-13;
  double abs_tol = 1e-300;
  int min_level = 3;
  int max_level = kMaxLevel;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int level = 0;
};

namespace detail {
inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
}  // namespace detail

/// Tanh-sinh quadrature of f(x, da, db) over [a, b]; integrable endpoint
/// singularities are allowed.  Levels are refined until successive sums agree.
template <class T, class F>
Result<T> tanh_sinh(F&& f, double a, double b, const Options& opt = {}) {
  Result<T> out;
  if (!(b > a)) return out;
  const double half = 0.5 * (b - a);
  T sum{};
  T previous{};
  auto add = [&](const TanhSinhLevel& lev, bool include_center) {
    T s{};
    for (std::size_t k = 0; k < lev.t.size(); ++k) {
      const double w = lev.weight[k];
      if (lev.t[k] == 0.0) {
        if (include_center) s += w * f(a + half, half, half);
        continue;
      }
      const double near = half * lev.complement[k];
      const double far = half * (1.0 + lev.abscissa[k]);
      if (near <= 0.0) continue;
      s += w * f(b - near, far, near);
      s += w * f(a + near, near, far);
    }
    return s;
  };
  double h = 1.0;
  double previous_diff = 0.0;
  sum = add(tanh_sinh_level(0), true);
  previous = sum * h * half;
  for (int level = 1; level <= opt.max_level; ++level) {
    h = tanh_sinh_level(level).h;
    sum += add(tanh_sinh_level(level), false);
    const T current = sum * h * half;
    const double diff = detail::magnitude(current - previous);
    out.value = current;
    out.error = diff;
    out.level = level;
    const double tol = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(current));
    if (level >= opt.min_level && diff <= tol) return out;
    // Errors square from one level to the next once the rule is resolved.
    if (level >= opt.min_level && previous_diff > 0.0 && diff < 1e-2 * previous_diff) {
      const double ratio = diff / previous_diff;
      if (10.0 * diff * ratio * ratio <= tol) return out;
    }
    previous = current;
    previous_diff = diff;
  }
  return out;
}

/// Convenience form for integrands that only need x.
template <class T, class F>
Result<T> tanh_sinh_x(F&& f, double a, double b, const Options& opt = {}) {
  return tanh_sinh<T>([&](double x, double, double) { return f(x); }, a, b,
                      opt);
}

}  // namespace breakup::quad
