#include "breakup/quadrature.hpp"

#include <array>
#include <numbers>

namespace breakup::quad {

namespace {

constexpr double kTMax = 4.0;

TanhSinhLevel build_level(int level) {
  TanhSinhLevel lev;
  lev.h = std::ldexp(1.0, -level);
  const int stride = level == 0 ? 1 : 2;
  const int first = level == 0 ? 0 : 1;
  const double half_pi = 0.5 * std::numbers::pi;
  for (int k = first;; k += stride) {
    const double t = k * lev.h;
    if (t > kTMax) break;
    const double u = half_pi * std::sinh(t);
    const double ch = std::cosh(u);
    lev.t.push_back(t);
    lev.abscissa.push_back(std::tanh(u));
    lev.complement.push_back(std::exp(-u) / ch);
    lev.weight.push_back(half_pi * std::cosh(t) / (ch * ch));
  }
  return lev;
}

}  // namespace

const TanhSinhLevel& tanh_sinh_level(int level) {
  static const std::array<TanhSinhLevel, kMaxLevel + 1> table = [] {
    std::array<TanhSinhLevel, kMaxLevel + 1> tab;
    for (int m = 0; m <= kMaxLevel; ++m) tab[m] = build_level(m);
    return tab;
  }();
  return table.at(static_cast<std::size_t>(level));
}

std::vector<Node> tanh_sinh_rule(double a, double b, int level) {
  std::vector<Node> nodes;
  const double half = 0.5 * (b - a);
  for (int m = 0; m <= level; ++m) {
    const TanhSinhLevel& lev = tanh_sinh_level(m);
    for (std::size_t k = 0; k < lev.t.size(); ++k) {
      const double w = lev.weight[k] * half;
      if (lev.t[k] == 0.0) {
        nodes.push_back({a + half, half, half, w, m});
        continue;
      }
      const double near = half * lev.complement[k];
      const double far = half * (1.0 + lev.abscissa[k]);
      if (near <= 0.0) continue;
      nodes.push_back({b - near, far, near, w, m});
      nodes.push_back({a + near, near, far, w, m});
    }
  }
  return nodes;
}

}  // namespace breakup::quad
