#include "breakup/kdv.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

#include "breakup/errors.hpp"

namespace breakup {

namespace {

using C = std::complex<double>;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Per-run FFT workspace; FFTW planning itself is not thread safe.
class Spectral {
 public:
  explicit Spectral(int n) : n_(n), m_(n / 2 + 1) {
    real_ = fftw_alloc_real(n_);
    spec_ = fftw_alloc_complex(m_);
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(n_, real_, spec_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(n_, spec_, real_, FFTW_ESTIMATE);
  }
  ~Spectral() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(real_);
    fftw_free(spec_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  int modes() const { return m_; }

  void forward(const std::vector<double>& in, std::vector<C>& out) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(fwd_);
    out.resize(m_);
    for (int k = 0; k < m_; ++k) out[k] = C(spec_[k][0], spec_[k][1]);
  }
  // Unnormalized inverse; the caller divides by n.
  void backward(const std::vector<C>& in, std::vector<double>& out) {
    for (int k = 0; k < m_; ++k) {
      spec_[k][0] = in[k].real();
      spec_[k][1] = in[k].imag();
    }
    fftw_execute(bwd_);
    out.assign(real_, real_ + n_);
  }

 private:
  int n_, m_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_, bwd_;
};

void check_config(const KdvConfig& c) {
  if (c.N < (1 << 12) || (c.N & (c.N - 1)) != 0)
    throw ConfigError("KdvConfig: N must be a power of two, at least 4096");
  if (!(c.L_d > 0.0 && c.dt > 0.0 && c.eps > 0.0)) throw ConfigError("KdvConfig: L_d, dt, eps must be positive");
  if (!(c.dealias > 0.0 && c.dealias <= 1.0)) throw ConfigError("KdvConfig: dealias fraction in (0, 1]");
}

double relative(double now, double ref) {
  return std::abs(now - ref) / std::max(std::abs(ref), 1e-300);
}

}  // namespace

int default_modes(double eps) {
  if (eps >= 0.07 - 1e-12) return 1 << 12;
  if (eps >= 0.05 - 1e-12) return 1 << 13;
  return 1 << 14;
}

double default_dt(double L_d, int N, double eps) { return L_d / N / (256.0 * eps); }

double KdvField::mass() const {
  double s = 0.0;
  for (double v : u) s += v;
  return s * 2.0 * config.L_d / config.N;
}

double KdvField::momentum() const {
  double s = 0.0;
  for (double v : u) s += v * v;
  return s * 2.0 * config.L_d / config.N;
}

double KdvField::mass_drift() const { return relative(mass(), mass0); }
double KdvField::momentum_drift() const { return relative(momentum(), momentum0); }

KdvField init_field(const std::function<double(double)>& u0, const KdvConfig& config) {
  check_config(config);
  if (!(std::abs(u0(-config.L_d)) < 1e-12 && std::abs(u0(config.L_d)) < 1e-12))
    throw ConfigError("init_field: datum does not decay to 1e-12 at the box edge");
  KdvField f;
  f.config = config;
  f.eps = config.eps;
  f.u.resize(config.N);
  for (int i = 0; i < config.N; ++i) f.u[i] = u0(f.x(i));
  f.mass0 = f.mass();
  f.momentum0 = f.momentum();
  return f;
}

KdvField init_field(const InitialProfile& profile, const KdvConfig& config) {
  return init_field(profile.u0, config);
}

KdvField evolve(const KdvField& field, double t_target) {
  if (!(t_target >= field.t)) throw DomainError("evolve: target time precedes the field");
  if (t_target == field.t) return field;
  const auto& cfg = field.config;
  check_config(cfg);
  const int n = cfg.N;
  Spectral fft(n);
  const int m = fft.modes();
  const double k0 = std::numbers::pi / cfg.L_d;
  const double eps2 = field.eps * field.eps;
  const double kcut = cfg.dealias * (n / 2);
  std::vector<double> k(m);
  std::vector<double> mask(m);
  for (int j = 0; j < m; ++j) {
    k[j] = k0 * j;
    mask[j] = j < kcut ? 1.0 : 0.0;
  }

  std::vector<C> v;
  fft.forward(field.u, v);
  for (int j = 0; j < m; ++j) v[j] *= mask[j];

  std::vector<double> phys;
  std::vector<C> work;
  // Nonlinear term -3 i k FFT(u^2), dealiased.
  auto nonlinear = [&](const std::vector<C>& vh, std::vector<C>& out) {
    fft.backward(vh, phys);
    const double inv = 1.0 / n;
    for (double& p : phys) {
      p *= inv;
      p = p * p;
    }
    fft.forward(phys, out);
    for (int j = 0; j < m; ++j) out[j] *= C(0.0, -3.0 * k[j]) * mask[j];
  };

  std::vector<C> E(m), E2(m), a(m), b(m), c(m), d(m), tmp(m);
  double factor_h = -1.0;
  auto step = [&](double h) {
    if (h != factor_h) {
      for (int j = 0; j < m; ++j) {
        // u_t = -eps^2 u_xxx is i eps^2 k^3 in Fourier space.
        E[j] = std::polar(1.0, eps2 * k[j] * k[j] * k[j] * 0.5 * h);
        E2[j] = E[j] * E[j];
      }
      factor_h = h;
    }
    nonlinear(v, a);
    for (int j = 0; j < m; ++j) a[j] *= h, tmp[j] = E[j] * (v[j] + 0.5 * a[j]);
    nonlinear(tmp, b);
    for (int j = 0; j < m; ++j) b[j] *= h, tmp[j] = E[j] * v[j] + 0.5 * b[j];
    nonlinear(tmp, c);
    for (int j = 0; j < m; ++j) c[j] *= h, tmp[j] = E2[j] * v[j] + E[j] * c[j];
    nonlinear(tmp, d);
    for (int j = 0; j < m; ++j) {
      d[j] *= h;
      v[j] = E2[j] * v[j] + (E2[j] * a[j] + 2.0 * E[j] * (b[j] + c[j]) + d[j]) / 6.0;
    }
  };

  const double span = t_target - field.t;
  const long full = long(std::floor(span / cfg.dt));
  double t = field.t;
  for (long s = 0; s < full; ++s) {
    step(cfg.dt);
    t = field.t + double(s + 1) * cfg.dt;
  }
  const double rest = t_target - t;
  if (rest > 1e-14 * std::max(1.0, std::abs(t_target))) step(rest);

  KdvField out = field;
  out.t = t_target;
  fft.backward(v, out.u);
  for (double& p : out.u) p /= n;
  for (double p : out.u)
    if (!std::isfinite(p)) throw InstabilityError("evolve: field is no longer finite");
  const double drift = std::max(out.mass_drift(), out.momentum_drift());
  if (drift > 1e-6)
    throw InstabilityError("evolve: conserved-quantity drift " + std::to_string(drift) + " exceeds 1e-6");
  return out;
}

KdvField evolve_converged(const KdvField& start, double t_target, double drift_tol) {
  KdvField trial = start;
  for (;;) {
    try {
      KdvField out = evolve(trial, t_target);
      if (std::max(out.mass_drift(), out.momentum_drift()) < drift_tol) return out;
    } catch (const InstabilityError&) {
    }
    trial.config.dt *= 0.5;
    if (trial.config.dt < 1e-8)
      throw InstabilityError("evolve_converged: drift stays above tolerance down to dt = 1e-8");
  }
}

double sample(const KdvField& field, double x) {
  return sample(field, std::vector<double>{x}).front();
}

std::vector<double> sample(const KdvField& field, const std::vector<double>& xs) {
  const auto& cfg = field.config;
  const int n = cfg.N;
  Spectral fft(n);
  std::vector<C> v;
  fft.forward(field.u, v);
  const double k0 = std::numbers::pi / cfg.L_d;
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (!(std::abs(x) <= cfg.L_d)) throw RangeError("sample: x outside the box");
    const double theta = k0 * (x + cfg.L_d);
    double s = v[0].real();
    for (int j = 1; j < n / 2; ++j) {
      const double ph = theta * j;
      s += 2.0 * (v[j].real() * std::cos(ph) - v[j].imag() * std::sin(ph));
    }
    s += v[n / 2].real() * std::cos(theta * (n / 2));
    out.push_back(s / n);
  }
  return out;
}

}  // namespace breakup
