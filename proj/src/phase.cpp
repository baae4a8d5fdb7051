#include "breakup/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "breakup/errors.hpp"

namespace breakup {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kCacheLevel = 7;
constexpr int kSplitLevel = 7;

constexpr std::array<double, 4> kGlX = {0.1834346424956498, 0.5255324099163290,
                                        0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlW = {0.3626837833783620, 0.3137066458778873,
                                        0.2223810344533745, 0.1012285362903763};

quad::Options tight() {
  quad::Options o;
  o.rel_tol = 1e-13;
  o.abs_tol = 1e-15;
  return o;
}

// Richardson table for E(h) = E0 + sum c_m h^(m * stride + offset), h halving.
template <class T>
T richardson(std::vector<T> e, int first_power, int power_step) {
  int power = first_power;
  while (e.size() > 1) {
    const double factor = std::ldexp(1.0, power) - 1.0;
    for (std::size_t j = 0; j + 1 < e.size(); ++j) e[j] = e[j + 1] + (e[j + 1] - e[j]) / factor;
    e.pop_back();
    power += power_step;
  }
  return e.front();
}

}  // namespace

PhaseContext::PhaseContext(InitialProfile profile, CatastrophePoint point)
    : profile_(std::move(profile)), point_(point), split_cache_(std::make_shared<SplitCache>()) {
  check_catastrophe(profile_, point_);
  s_max_ = std::sqrt(-point_.u_c);
  nodes_ = quad::tanh_sinh_rule(0.0, s_max_, kCacheLevel);
  rho_nodes_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double db = nodes_[i].db;
    const double eta = -db * (2.0 * s_max_ - db);
    rho_nodes_[i] = eta > -1e-300 ? 0.0 : rho(std::max(eta, point_.u_c));
  }
}

double PhaseContext::f_minus(double u) const { return inverse_branch(profile_, u, Branch::minus); }

double PhaseContext::f_plus(double u) const { return inverse_branch(profile_, u, Branch::plus); }

double PhaseContext::f_minus_prime_raw(double u) const {
  // Nodes this close to u = 0 carry negligible weight.
  if (u > -1e-280) return 0.0;
  return 1.0 / profile_.du0(f_minus(u));
}

double PhaseContext::rho(double lambda) const {
  if (!(lambda > -1.0 && lambda < 0.0)) throw DomainError("rho requires -1 < lambda < 0");
  const double sm = std::sqrt(-lambda);
  auto integrand = [&](double, double, double db) {
    const double u = std::max(-db * (2.0 * sm - db), lambda);
    if (u > -1e-250) return 0.0;
    return f_minus(u);
  };
  return quad::tanh_sinh<double>(integrand, 0.0, sm, tight()).value;
}

double PhaseContext::rho_tilde(double lambda) const {
  if (!(lambda > -1.0 && lambda < 0.0)) throw DomainError("rho_tilde requires -1 < lambda < 0");
  const double sm = std::sqrt(-lambda);
  auto integrand = [&](double, double, double db) {
    const double u = std::max(-db * (2.0 * sm - db), lambda);
    if (u > -1e-250) return 0.0;
    return f_plus(u);
  };
  return quad::tanh_sinh<double>(integrand, 0.0, sm, tight()).value;
}

double PhaseContext::tau(double lambda) const {
  if (!(lambda >= -1.0 && lambda < 0.0)) throw DomainError("tau requires -1 <= lambda < 0");
  if (lambda == -1.0) return 0.0;
  const double a = f_minus(lambda), b = f_plus(lambda);
  auto integrand = [&](double x, double, double) {
    return std::sqrt(std::max(0.0, lambda - profile_.u0(x)));
  };
  return quad::tanh_sinh<double>(integrand, a, b, tight()).value;
}

double PhaseContext::alpha(double lambda, double x, double t) {
  const double m = std::sqrt(-lambda);
  return 4.0 * t * m * m * m + x * m;
}

double PhaseContext::rho_minus_alpha_sum(double x, double t, int level) const {
  std::vector<double> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double db = nodes_[i].db;
    const double eta = -db * (2.0 * s_max_ - db);
    v[i] = 2.0 * (rho_nodes_[i] - alpha(std::min(eta, 0.0), x, t));
  }
  return quad::rule_sum(nodes_, v, level);
}

double PhaseContext::g_infinity_coefficient(double x, double t) const {
  return rho_minus_alpha_sum(x, t, kCacheLevel) / kPi;
}

Complex PhaseContext::g_sum(Complex lambda, double x, double t, int level) const {
  std::vector<Complex> v(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double db = nodes_[i].db;
    const double eta = -db * (2.0 * s_max_ - db);
    v[i] = 2.0 * (rho_nodes_[i] - alpha(std::min(eta, 0.0), x, t)) / (eta - lambda);
  }
  return std::sqrt(point_.u_c - lambda) / kPi * quad::rule_sum(nodes_, v, level);
}

Complex PhaseContext::g_offaxis(Complex lambda, double x, double t) const {
  const double u_c = point_.u_c;
  const double re = lambda.real(), im = lambda.imag();
  if (im == 0.0 && re >= u_c) throw DomainError("g_offaxis: lambda on the branch cut");
  const double dx = re < u_c ? u_c - re : (re > 0.0 ? re : 0.0);
  const double dist = std::hypot(dx, im);
  if (dist > 0.05) {
    const Complex fine = g_sum(lambda, x, t, kCacheLevel);
    const Complex coarse = g_sum(lambda, x, t, kCacheLevel - 1);
    if (std::abs(fine - coarse) <= 1e-12 * std::max(1.0, std::abs(fine))) return fine;
  }
  if (re > u_c && re < 0.0) {
    return std::sqrt(u_c - lambda) / kPi * g_split_sums(re, x, t, {im}).front();
  }
  auto integrand = [&](double s, double, double db) -> Complex {
    const double eta = -db * (2.0 * s_max_ - db);
    const double r = eta > -1e-300 ? 0.0 : rho(std::max(eta, u_c));
    (void)s;
    return 2.0 * (r - alpha(std::min(eta, 0.0), x, t)) / (eta - lambda);
  };
  const Complex sum = quad::tanh_sinh<Complex>(integrand, 0.0, s_max_, tight()).value;
  return std::sqrt(u_c - lambda) / kPi * sum;
}

struct PhaseContext::SplitCache {
  std::mutex mutex;
  std::shared_ptr<const SplitRho> last;
};

std::shared_ptr<const PhaseContext::SplitRho> PhaseContext::split_rho(double lambda_r) const {
  {
    std::lock_guard lock(split_cache_->mutex);
    if (split_cache_->last && split_cache_->last->lambda_r == lambda_r) return split_cache_->last;
  }
  const double u_c = point_.u_c;
  auto out = std::make_shared<SplitRho>();
  out->lambda_r = lambda_r;
  // Piece a: eta = u_c + s^2 for s in [0, sqrt(lambda_r - u_c)].  Piece b: eta in [lambda_r, 0].
  out->a = quad::tanh_sinh_rule(0.0, std::sqrt(lambda_r - u_c), kSplitLevel);
  out->b = quad::tanh_sinh_rule(lambda_r, 0.0, kSplitLevel);
  for (const auto& n : out->a) out->rho_a.push_back(rho(std::max(u_c + n.x * n.x, u_c)));
  for (const auto& n : out->b) {
    const double eta = -n.db;
    out->rho_b.push_back(eta > -1e-300 ? 0.0 : rho(std::max(eta, lambda_r)));
  }
  std::lock_guard lock(split_cache_->mutex);
  split_cache_->last = out;
  return out;
}

std::vector<Complex> PhaseContext::g_split_sums(double lambda_r, double x, double t,
                                                const std::vector<double>& ys) const {
  const double u_c = point_.u_c;
  const auto sp = split_rho(lambda_r);
  const double s_r = std::sqrt(lambda_r - u_c);
  const auto& ra = sp->a;
  const auto& rb = sp->b;
  std::vector<double> num_a(ra.size()), off_a(ra.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double s = ra[i].x, db = ra[i].db;
    off_a[i] = -db * (2.0 * s_r - db);  // eta - lambda_r
    num_a[i] = 2.0 * (sp->rho_a[i] - alpha(std::max(u_c + s * s, u_c), x, t));
  }
  std::vector<double> num_b(rb.size()), off_b(rb.size());
  for (std::size_t i = 0; i < rb.size(); ++i) {
    const double da = rb[i].da, eta = -rb[i].db;
    off_b[i] = da;
    num_b[i] = (sp->rho_b[i] - alpha(std::min(eta, 0.0), x, t)) / std::sqrt(lambda_r - u_c + da);
  }
  std::vector<Complex> out;
  for (double y : ys) {
    std::vector<Complex> va(ra.size()), vb(rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) va[i] = num_a[i] / Complex(off_a[i], -y);
    for (std::size_t i = 0; i < rb.size(); ++i) vb[i] = num_b[i] / Complex(off_b[i], -y);
    out.push_back(quad::rule_sum(ra, va, kSplitLevel) + quad::rule_sum(rb, vb, kSplitLevel));
  }
  return out;
}

// PV of the integral of h(eta) / (eta - lambda) over [u_c, 0], with
// h = (rho - alpha) / sqrt(eta - u_c), by subtracting h(lambda).
double PhaseContext::pv_integral(double lambda, double x, double t) const {
  const double u_c = point_.u_c;
  const auto sp = split_rho(lambda);
  const double s_r = std::sqrt(lambda - u_c);
  const double h0 = (rho(lambda) - alpha(lambda, x, t)) / s_r;
  std::vector<double> va(sp->a.size()), vb(sp->b.size());
  for (std::size_t i = 0; i < sp->a.size(); ++i) {
    const double s = sp->a[i].x, db = sp->a[i].db;
    const double off = -db * (2.0 * s_r - db);
    if (off == 0.0) continue;
    const double eta = std::max(u_c + s * s, u_c);
    va[i] = 2.0 * (sp->rho_a[i] - alpha(eta, x, t) - s * h0) / off;
  }
  for (std::size_t i = 0; i < sp->b.size(); ++i) {
    const double da = sp->b[i].da, eta = -sp->b[i].db;
    if (da == 0.0) continue;
    const double h = (sp->rho_b[i] - alpha(std::min(eta, 0.0), x, t)) / std::sqrt(s_r * s_r + da);
    vb[i] = (h - h0) / da;
  }
  return quad::rule_sum(sp->a, va, kSplitLevel) + quad::rule_sum(sp->b, vb, kSplitLevel) +
         h0 * std::log(-lambda / (lambda - u_c));
}

Complex PhaseContext::g_function(double lambda, double x, double t, Side side) const {
  const double u_c = point_.u_c;
  if (!(lambda < 0.0)) throw DomainError("g_function requires lambda < 0");
  if (std::abs(lambda - u_c) < 1e-6)
    throw NearSingularError("g_function: lambda within 1e-6 of u_c; use phi_closed");
  if (lambda < u_c) return g_offaxis(Complex(lambda, 0.0), x, t);
  const double pv = pv_integral(lambda, x, t);
  const double root = std::sqrt(lambda - u_c);
  const double residue = rho(lambda) - alpha(lambda, x, t);
  const double sgn = side == Side::upper ? -1.0 : 1.0;
  return Complex(residue, sgn * root * pv / kPi);
}

Complex PhaseContext::g_boundary_limit(double lambda, double x, double t, Side side) const {
  const double u_c = point_.u_c;
  const double sgn = side == Side::upper ? 1.0 : -1.0;
  std::vector<Complex> values;
  if (lambda > u_c && lambda < 0.0) {
    const double y0 = 0.05 * std::min(lambda - u_c, -lambda);
    std::vector<double> ys;
    for (int j = 0; j < 5; ++j) ys.push_back(sgn * std::ldexp(y0, -j));
    const auto sums = g_split_sums(lambda, x, t, ys);
    for (std::size_t j = 0; j < ys.size(); ++j)
      values.push_back(std::sqrt(Complex(u_c - lambda, -ys[j])) / kPi * sums[j]);
  } else {
    const double d = lambda < u_c ? u_c - lambda : lambda;
    const double y0 = 0.05 * std::min(1.0, d);
    for (int j = 0; j < 5; ++j)
      values.push_back(g_offaxis(Complex(lambda, sgn * std::ldexp(y0, -j)), x, t));
  }
  return richardson(values, 1, 1);
}

Complex PhaseContext::phi_closed(double lambda, double x, double t) const {
  const double u_c = point_.u_c;
  if (!(lambda > -1.0 && lambda <= 0.0)) throw DomainError("phi_closed requires -1 < lambda <= 0");
  const double D = x - point_.x_c - 6.0 * u_c * (t - point_.t_c);
  if (lambda <= u_c) {
    auto f = [&](double xi, double da, double) { return (f_minus_prime_raw(xi) + 6.0 * t) * std::sqrt(da); };
    const double integral = quad::tanh_sinh<double>(f, lambda, u_c, tight()).value;
    return std::sqrt(u_c - lambda) * D + integral;
  }
  auto f = [&](double xi, double, double db) { return (f_minus_prime_raw(xi) + 6.0 * t) * std::sqrt(db); };
  const double integral = quad::tanh_sinh<double>(f, u_c, lambda, tight()).value;
  return Complex(0.0, -std::sqrt(lambda - u_c) * D + integral);
}

Complex PhaseContext::phi_by_parts(double lambda, double x, double t) const {
  const double u_c = point_.u_c;
  if (!(lambda > -1.0 && lambda <= 0.0)) throw DomainError("phi_by_parts requires -1 < lambda <= 0");
  const double D = x - point_.x_c - 6.0 * u_c * (t - point_.t_c);
  const double dt = t - point_.t_c;
  auto f3 = [&](double xi) {
    const double z = f_minus(xi);
    const double d1 = profile_.du0(z);
    const double r2 = profile_.d2u0(z) / d1, r3 = profile_.d3u0(z) / d1;
    return (3.0 * r2 * r2 - r3) / (d1 * d1 * d1);
  };
  if (lambda <= u_c) {
    const double m = u_c - lambda;
    auto f = [&](double xi, double da, double) { return f3(xi) * da * da * std::sqrt(da); };
    const double integral = quad::tanh_sinh<double>(f, lambda, u_c, tight()).value;
    return std::sqrt(m) * D + 4.0 * m * std::sqrt(m) * dt + 4.0 / 15.0 * integral;
  }
  const double m = lambda - u_c;
  auto f = [&](double xi, double, double db) {
    if (xi > -1e-280) return 0.0;
    return f3(xi) * db * db * std::sqrt(db);
  };
  const double integral = quad::tanh_sinh<double>(f, u_c, lambda, tight()).value;
  return Complex(0.0, -std::sqrt(m) * D + 4.0 * m * std::sqrt(m) * dt + 4.0 / 15.0 * integral);
}

Complex PhaseContext::phi_prime(double lambda, double x, double t) const {
  const double u_c = point_.u_c;
  if (!(lambda > -1.0 && lambda < 0.0) || lambda == u_c)
    throw DomainError("phi_prime requires lambda in (-1, 0), lambda != u_c");
  const double D = x - point_.x_c - 6.0 * u_c * (t - point_.t_c);
  if (lambda < u_c) {
    auto f = [&](double xi, double da, double) { return (f_minus_prime_raw(xi) + 6.0 * t) / std::sqrt(da); };
    const double integral = quad::tanh_sinh<double>(f, lambda, u_c, tight()).value;
    return -D / (2.0 * std::sqrt(u_c - lambda)) - 0.5 * integral;
  }
  auto f = [&](double xi, double, double db) { return (f_minus_prime_raw(xi) + 6.0 * t) / std::sqrt(db); };
  const double integral = quad::tanh_sinh<double>(f, u_c, lambda, tight()).value;
  return Complex(0.0, -D / (2.0 * std::sqrt(lambda - u_c)) + 0.5 * integral);
}

Complex PhaseContext::segment_moment(Complex lambda, double t) const {
  const double u_c = point_.u_c;
  if (lambda.imag() == 0.0 && !(lambda.real() > -1.0 && lambda.real() < 0.0))
    throw BranchError("segment_moment: real lambda must lie in (-1, 0)");
  // s = sigma^2; nodes visited from sigma = 1 (xi = u_c) towards sigma = 0.
  InverseContinuation track(profile_, u_c, point_.xi_c);
  const Complex delta = u_c - lambda;
  const int panels = 160;
  Complex sum = 0.0;
  for (int p = panels - 1; p >= 0; --p) {
    const double a = double(p) / panels, b = double(p + 1) / panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < 8; ++k) {
      const double sigma = k < 4 ? mid + half * kGlX[k] : mid - half * kGlX[7 - k];
      const double w = (k < 4 ? kGlW[k] : kGlW[7 - k]) * half;
      const double s = sigma * sigma;
      track.move_to(u_c - (1.0 - s) * delta);
      sum += w * 2.0 * s * (track.f_minus_prime() + 6.0 * t);
    }
  }
  return sum;
}

Complex PhaseContext::phi_complex(Complex lambda, double x, double t) const {
  const double u_c = point_.u_c;
  const double D = x - point_.x_c - 6.0 * u_c * (t - point_.t_c);
  const Complex delta = u_c - lambda;
  const Complex root = std::sqrt(delta);
  return root * D + delta * root * segment_moment(lambda, t);
}

// ---------------------------------------------------------------------------

LocalMaps::LocalMaps(std::shared_ptr<const PhaseContext> ctx, double x_shift, double t)
    : ctx_(std::move(ctx)) {
  const CatastrophePoint& c = ctx_->point();
  u_c_ = c.u_c;
  radius_ = 0.5 * std::min(u_c_ + 1.0, -u_c_);
  const double x_shift_c = c.x_c - 6.0 * c.u_c * c.t_c;
  shift_offset_ = x_shift - x_shift_c;
  time_offset_ = t - c.t_c;
  q0_ = std::pow(8.0 * c.k, 2.0 / 7.0);
  const InitialProfile& p = ctx_->profile();
  auto f3 = [&](double u) { return f_minus_derivative(p, u, 3); };
  const double u = u_c_;
  double h = 2e-3;
  const double f4 = (-f3(u + 2 * h) + 8 * f3(u + h) - 8 * f3(u - h) + f3(u - 2 * h)) / (12 * h);
  h = 5e-3;
  const double f5 =
      (-f3(u + 2 * h) + 16 * f3(u + h) - 30 * f3(u) + 16 * f3(u - h) - f3(u - 2 * h)) / (12 * h * h);
  h = 1e-2;
  const double f6 = (f3(u + 2 * h) - 2 * f3(u + h) + 2 * f3(u - h) - f3(u - 2 * h)) / (2 * h * h * h);
  p_ = {2.0 / 9.0 * f4 / c.k, -4.0 / 99.0 * f5 / c.k, 8.0 / 1287.0 * f6 / c.k};
}

void LocalMaps::check_range(Complex lambda) const {
  if (!(std::abs(lambda - u_c_) <= radius_))
    throw RangeError("local maps evaluated outside their disk of validity");
}

Complex LocalMaps::q(Complex lambda) const {
  check_range(lambda);
  const Complex delta = u_c_ - lambda;
  if (std::abs(delta) < 1e-3) {
    const Complex P = 1.0 + delta * (p_[0] + delta * (p_[1] + delta * p_[2]));
    return q0_ * std::pow(P, 2.0 / 7.0);
  }
  const double t_c = ctx_->point().t_c;
  Complex moment;
  if (lambda.imag() == 0.0) {
    const double lam = lambda.real(), d = delta.real();
    const double u_c = u_c_;
    const InitialProfile& p = ctx_->profile();
    auto f = [&](double, double da, double db) {
      const double xi = u_c - db * d;
      return (1.0 / p.du0(inverse_branch(p, xi, Branch::minus)) + 6.0 * t_c) * std::sqrt(da);
    };
    (void)lam;
    moment = quad::tanh_sinh<double>(f, 0.0, 1.0, tight()).value;
  } else {
    moment = ctx_->segment_moment(lambda, t_c);
  }
  return std::pow(-105.0 * moment / (delta * delta), 2.0 / 7.0);
}

Complex LocalMaps::f(Complex lambda) const { return (lambda - u_c_) * q(lambda); }

Complex LocalMaps::g1(Complex lambda) const {
  if (shift_offset_ == 0.0) {
    check_range(lambda);
    return 0.0;
  }
  return shift_offset_ / std::sqrt(q(lambda));
}

Complex LocalMaps::g2(Complex lambda) const {
  if (time_offset_ == 0.0) {
    check_range(lambda);
    return 0.0;
  }
  const Complex qq = q(lambda);
  return 12.0 * time_offset_ / (qq * std::sqrt(qq));
}

LocalMaps local_maps(std::shared_ptr<const PhaseContext> ctx, double x_shift, double t) {
  return LocalMaps(std::move(ctx), x_shift, t);
}

// ---------------------------------------------------------------------------

PhiSignReport check_phi_signs(const PhaseContext& ctx, double x, double t, double delta) {
  const double u_c = ctx.point().u_c;
  PhiSignReport report;
  report.lines[0].name = "Im phi > 0 above (-1-delta, u_c-delta)";
  report.lines[1].name = "Im phi < 0 below (-1-delta, u_c-delta)";
  report.lines[2].name = "Im phi_+ < 0 on [u_c+delta, 0]";
  report.lines[3].name = "-tau + i phi_+ < 0 on [u_c+delta, 0]";

  const int n_re = 24;
  const std::array<double, 5> fractions = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0};
  double height = 0.3;
  for (;;) {
    double upper = std::numeric_limits<double>::infinity();
    double lower = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n_re; ++i) {
      const double re = -1.0 - delta + (u_c - delta - (-1.0 - delta)) * i / n_re;
      for (double fr : fractions) {
        const double y = fr * height;
        upper = std::min(upper, ctx.phi_complex(Complex(re, y), x, t).imag());
        lower = std::min(lower, -ctx.phi_complex(Complex(re, -y), x, t).imag());
      }
    }
    report.lines[0].worst_margin = upper;
    report.lines[1].worst_margin = lower;
    report.lines[0].pass = upper > 0.0;
    report.lines[1].pass = lower > 0.0;
    if ((upper > 0.0 && lower > 0.0) || height < 0.3 / 64) break;
    height *= 0.5;
  }
  report.rectangle_height = height;

  const int n = 40;
  const double right = -1e-10;
  double m3 = std::numeric_limits<double>::infinity();
  double m4 = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double lam = u_c + delta + (right - u_c - delta) * i / n;
    const double b = ctx.phi_closed(lam, x, t).imag();
    m3 = std::min(m3, -b);
    m4 = std::min(m4, ctx.tau(lam) + b);
  }
  report.lines[2].worst_margin = m3;
  report.lines[3].worst_margin = m4;
  report.lines[2].pass = m3 > 0.0;
  report.lines[3].pass = m4 > 0.0;
  return report;
}

}  // namespace breakup
