#include "breakup/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "breakup/errors.hpp"
#include "breakup/fit.hpp"
#include "breakup/hopf.hpp"

namespace breakup {

double ScalingMap::x_scale(double eps) const {
  return std::pow(8.0 * point.k * std::pow(eps, 6), 1.0 / 7.0);
}

double ScalingMap::t_scale(double eps) const {
  return std::pow(4.0 * point.k * point.k * point.k * std::pow(eps, 4), 1.0 / 7.0) / 6.0;
}

double ScalingMap::amplitude(double eps) const {
  return std::pow(2.0 * eps * eps / (point.k * point.k), 1.0 / 7.0);
}

double ScalingMap::t(double T, double eps) const { return point.t_c + t_scale(eps) * T; }

double ScalingMap::x(double X, double T, double eps) const {
  return point.x_c + 6.0 * point.u_c * (t(T, eps) - point.t_c) + x_scale(eps) * X;
}

FieldProvider direct_kdv_provider(const InitialProfile& profile, double L_d) {
  auto last = std::make_shared<std::map<double, KdvField>>();
  return [profile, L_d, last](double eps, double t) {
    auto it = last->find(eps);
    KdvField start;
    if (it != last->end() && it->second.t <= t) {
      start = it->second;
    } else {
      KdvConfig cfg;
      cfg.L_d = L_d;
      cfg.eps = eps;
      cfg.N = default_modes(eps);
      cfg.dt = default_dt(L_d, cfg.N, eps);
      start = init_field(profile, cfg);
    }
    KdvField out = evolve_converged(start, t);
    (*last)[eps] = out;
    return out;
  };
}

std::vector<double> x_window(double x_max, int points) {
  if (points < 2 || !(x_max > 0.0)) throw DomainError("x_window: need x_max > 0 and two points");
  std::vector<double> X(points);
  for (int i = 0; i < points; ++i) X[i] = x_max * double(2 * i - (points - 1)) / double(points - 1);
  return X;
}

ComparisonReport universality_compare(const InitialProfile& profile, const CatastrophePoint& point,
                                      const Pi2Family& family, const std::vector<double>& eps_ladder,
                                      const std::vector<double>& T_list,
                                      const std::vector<double>& X_window,
                                      const FieldProvider& provider) {
  (void)profile;
  const ScalingMap map{point};
  ComparisonReport rep;
  rep.eps = eps_ladder;
  std::vector<double> Ts = T_list;
  std::sort(Ts.begin(), Ts.end());

  for (double eps : eps_ladder) {
    const double a = map.amplitude(eps);
    for (double T : Ts) {
      ComparisonRow row{eps, T, std::nan(""), ""};
      try {
        const Pi2Solution& member = family.at(T);
        const KdvField field = provider(eps, map.t(T, eps));
        std::vector<double> xs(X_window.size());
        for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = map.x(X_window[i], T, eps);
        const auto us = sample(field, xs);
        double worst = 0.0;
        RescaledProfile prof{eps, X_window, {}, {}, 0.0};
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double U = evaluate(member, X_window[i]);
          worst = std::max(worst, std::abs(us[i] - point.u_c - a * U));
          prof.rescaled.push_back((us[i] - point.u_c) / a);
          prof.limit.push_back(U);
          prof.gap = std::max(prof.gap, std::abs(prof.rescaled.back() - U));
        }
        row.sup_error = worst;
        if (T == 0.0) rep.profiles.push_back(std::move(prof));
      } catch (const Error& e) {
        row.failure = e.what();
      }
      rep.rows.push_back(row);
    }
  }

  auto fit = [&](const std::vector<double>& use_T) -> std::optional<double> {
    std::vector<double> xs, ys;
    for (double eps : eps_ladder) {
      double worst = 0.0;
      bool ok = true;
      for (const auto& r : rep.rows)
        if (r.eps == eps && std::find(use_T.begin(), use_T.end(), r.T) != use_T.end()) {
          if (!r.failure.empty()) ok = false;
          else worst = std::max(worst, r.sup_error);
        }
      if (ok && worst > 0.0) {
        xs.push_back(eps);
        ys.push_back(worst);
      }
    }
    if (xs.size() < 3) return std::nullopt;
    return loglog_slope(xs, ys);
  };
  rep.slope = fit(Ts);
  for (double T : Ts)
    if (auto s = fit({T})) rep.slope_by_T[T] = *s;
  return rep;
}

std::string report_csv(const ComparisonReport& report) {
  std::string out = "eps,T,sup_error\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.eps, r.T, r.sup_error);
    out += buf;
  }
  if (report.slope) std::snprintf(buf, sizeof buf, "slope=%.4f target=0.5714\n", *report.slope);
  else std::snprintf(buf, sizeof buf, "slope=nan target=0.5714\n");
  out += buf;
  return out;
}

HopfTable hopf_validation(const InitialProfile& profile, const CatastrophePoint& point,
                          const std::vector<double>& eps_ladder, double t,
                          const FieldProvider& provider) {
  if (!(t >= 0.0 && t <= 0.9 * point.t_c)) throw DomainError("hopf_validation requires 0 <= t <= 0.9 t_c");
  HopfTable table;
  table.t = t;
  for (double eps : eps_ladder) {
    const KdvField field = provider(eps, t);
    CharacteristicSolver hopf(profile, point);
    double worst = 0.0;
    for (int i = 0; i < field.config.N; ++i) {
      const double x = field.x(i);
      if (std::abs(x) > 3.0) continue;
      worst = std::max(worst, std::abs(field.u[i] - hopf.solve(x, t).u));
    }
    table.rows.push_back({eps, worst});
  }
  auto sorted = table.rows;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.eps > b.eps; });
  table.monotone = true;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!(sorted[i].error < sorted[i - 1].error)) table.monotone = false;
  if (sorted.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& r : sorted) {
      xs.push_back(r.eps);
      ys.push_back(r.error);
    }
    table.slope = loglog_slope(xs, ys);
  }
  return table;
}

}  // namespace breakup
