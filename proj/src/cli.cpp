#include "breakup/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "breakup/cache_io.hpp"
#include "breakup/config.hpp"
#include "breakup/errors.hpp"
#include "breakup/fit.hpp"
#include "breakup/harness.hpp"
#include "breakup/hopf.hpp"
#include "breakup/phase.hpp"
#include "breakup/scattering.hpp"

namespace breakup {

namespace fs = std::filesystem;

namespace {

struct Context {
  RunConfig cfg;
  std::ostream& out;
  std::ostream& err;
  fs::path root() const { return fs::path(cfg.output); }
  fs::path cache_dir() const { return root() / "cache"; }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct CheckLine {
  std::string name;
  double worst;
  double tolerance;
  bool pass() const { return worst < tolerance; }
};

// Per-lambda residuals in long form, one check per block.
struct ResidualTable {
  std::string csv = "check,lambda,residual\n";
  double add(const std::string& check, double lambda, double residual) {
    csv += check + "," + format_double(lambda) + "," + format_double(residual) + "\n";
    return residual;
  }
};

int run_catastrophe(Context& c) {
  const auto p = profile_by_name(c.cfg.profile);
  const auto cp = locate_catastrophe(p);
  std::string s = "profile,x_c,t_c,u_c,xi_c,k\n";
  s += p.name + "," + format_double(cp.x_c) + "," + format_double(cp.t_c) + "," + format_double(cp.u_c) + "," +
       format_double(cp.xi_c) + "," + format_double(cp.k) + "\n";
  write_atomic((c.root() / "catastrophe.csv").string(), s);
  c.out << s;
  return 0;
}

int run_hopf(Context& c, double t_fraction) {
  if (!(t_fraction >= 0.0 && t_fraction <= 1.0)) throw ConfigError("--t-frac must lie in [0, 1]");
  const auto p = profile_by_name(c.cfg.profile);
  const auto cp = locate_catastrophe(p);
  const double t = t_fraction * cp.t_c;
  CharacteristicSolver solver(p, cp);
  std::string s = "# t=" + format_double(t) + "\nx,u,ux\n";
  for (int i = 0; i <= 600; ++i) {
    const double x = -3.0 + 6.0 * i / 600.0;
    const auto h = solver.solve(x, t);
    s += format_double(x) + "," + format_double(h.u) + "," + format_double(h.ux) + "\n";
  }
  write_atomic((c.root() / "hopf.csv").string(), s);
  c.out << "hopf: 601 samples at t=" << num(t) << " written to " << (c.root() / "hopf.csv").string() << "\n";
  return 0;
}

int run_phase_check(Context& c) {
  const auto p = profile_by_name(c.cfg.profile);
  const auto cp = locate_catastrophe(p);
  auto ctx = std::make_shared<PhaseContext>(p, cp);
  const double x = cp.x_c, t = cp.t_c, u_c = cp.u_c;
  std::vector<CheckLine> lines;
  ResidualTable table;

  double w = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double lam = -0.95 + (u_c - 0.05 + 0.95) * i / 49.0;
    const Complex G = ctx->g_function(lam, x, t);
    w = std::max(w, table.add("identity", lam,
                              std::abs(G - ctx->rho(lam) + PhaseContext::alpha(lam, x, t) -
                                       ctx->phi_closed(lam, x, t))));
  }
  lines.push_back({"G - rho + alpha = phi below u_c", w, 1e-7});

  double w_sum = 0.0, w_routes = 0.0, w_jump = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double lam = u_c + 0.02 + (-0.04 - u_c) * i / 49.0;
    const Complex gp = ctx->g_function(lam, x, t, Side::upper);
    const Complex gm = ctx->g_function(lam, x, t, Side::lower);
    const Complex bp = ctx->g_boundary_limit(lam, x, t, Side::upper);
    const Complex bm = ctx->g_boundary_limit(lam, x, t, Side::lower);
    const double ra = ctx->rho(lam) - PhaseContext::alpha(lam, x, t);
    w_sum = std::max(w_sum, table.add("sum_on_cut", lam, std::abs(bp + bm - 2.0 * ra)));
    w_routes = std::max(w_routes, table.add("pv_vs_offaxis", lam, std::abs(gp - bp) + std::abs(gm - bm)));
    w_jump = std::max(w_jump, table.add("jump_is_phi", lam, std::abs(0.5 * (gp - gm) - ctx->phi_closed(lam, x, t))));
  }
  lines.push_back({"G+ + G- = 2(rho - alpha) on (u_c, 0)", w_sum, 1e-7});
  lines.push_back({"principal value vs off-axis limit", w_routes, 1e-7});
  lines.push_back({"(G+ - G-)/2 = phi+ on (u_c, 0)", w_jump, 1e-7});

  double w_pos = 0.0, w_below = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double lp = 0.05 + 2.0 * i / 49.0;
    w_pos = std::max(w_pos, table.add("sum_positive", lp,
                                      std::abs(ctx->g_boundary_limit(lp, x, t, Side::upper) +
                                               ctx->g_boundary_limit(lp, x, t, Side::lower))));
    const double lb = -0.99 + (u_c - 0.05 + 0.99) * i / 49.0;
    w_below = std::max(w_below, table.add("jump_below", lb,
                                          std::abs(ctx->g_boundary_limit(lb, x, t, Side::upper) -
                                                   ctx->g_boundary_limit(lb, x, t, Side::lower))));
  }
  lines.push_back({"G+ + G- = 0 for lambda > 0", w_pos, 1e-7});
  lines.push_back({"G+ - G- = 0 for lambda < u_c", w_below, 1e-7});

  double w_phi = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double lam = -0.99 + 0.98 * i / 49.0;
    w_phi = std::max(w_phi, table.add("phi_by_parts", lam,
                                      std::abs(ctx->phi_closed(lam, x, t) - ctx->phi_by_parts(lam, x, t))));
  }
  lines.push_back({"phi closed vs by parts", w_phi, 1e-8});

  const auto maps = local_maps(ctx, x - 6.0 * u_c * t, t);
  const double h = 2e-3;
  const Complex fp = (-maps.f(u_c + 2 * h) + 8.0 * maps.f(u_c + h) - 8.0 * maps.f(u_c - h) + maps.f(u_c - 2 * h)) /
                     (12.0 * h);
  const double target = std::pow(8.0 * cp.k, 2.0 / 7.0);
  lines.push_back({"f'(u_c) vs (8k)^(2/7), relative", std::abs(fp.real() / target - 1.0), 1e-6});

  write_atomic((c.root() / "phase_check.csv").string(), table.csv);
  bool ok = true;
  for (const auto& l : lines) {
    c.out << (l.pass() ? "PASS " : "FAIL ") << l.name << "  worst=" << num(l.worst) << "\n";
    ok = ok && l.pass();
  }
  const auto signs = check_phi_signs(*ctx, x, t);
  for (const auto& l : signs.lines) {
    c.out << (l.pass ? "PASS " : "FAIL ") << l.name << "  margin=" << num(l.worst_margin) << "\n";
    ok = ok && l.pass;
  }
  return ok ? 0 : 1;
}

int run_scattering_check(Context& c) {
  const auto p = profile_by_name(c.cfg.profile);
  const auto cp = locate_catastrophe(p);
  PhaseContext ctx(p, cp);
  std::vector<double> lambdas;
  for (int i = 0; i < 9; ++i) lambdas.push_back(-0.9 + 0.1 * i);
  const std::vector<double> eps = {0.1, 0.05, 0.025};
  const auto rep = wkb_validation(ctx, lambdas, eps);
  std::string s = "lambda,eps,abs_r,abs_kappa_minus_1,unitarity_residual\n";
  for (const auto& e : rep.samples)
    s += format_double(e.lambda) + "," + format_double(e.eps) + "," + format_double(std::abs(e.r)) + "," +
         format_double(std::abs(e.kappa - 1.0)) + "," + format_double(e.unitarity_residual) + "\n";
  write_atomic((c.root() / "scattering.csv").string(), s);
  const double n0 = n_function(1e-14).real();
  const double n1 = n_function(1.0).real();
  const bool slope_ok = std::abs(rep.kappa_slope - 1.0) <= 0.2;
  const bool n_ok = std::abs(n0 - std::sqrt(2.0)) < 1e-10 && std::abs(n1 - 2.0 * std::sqrt(2.0) / std::numbers::e) < 1e-10;
  c.out << "kappa_slope=" << num(rep.kappa_slope) << " target=1 " << (slope_ok ? "PASS" : "FAIL") << "\n";
  c.out << "N(0+)=" << format_double(n0) << " N(1)=" << format_double(n1) << " " << (n_ok ? "PASS" : "FAIL") << "\n";
  return slope_ok && n_ok ? 0 : 1;
}

Pi2Family obtain_pi2(Context& c, bool& computed) {
  const fs::path path = c.cache_dir() / pi2_cache_name(c.cfg.L, c.cfg.h);
  computed = false;
  if (c.cfg.cache == CachePolicy::use && fs::exists(path)) {
    auto fam = read_pi2_cache(path.string());
    bool covers = true;
    for (double T : c.cfg.T) covers = covers && fam.contains(T);
    if (covers) return fam;
  }
  auto fam = continuation_in_T(Pi2Grid::with_spacing(c.cfg.L, c.cfg.h), c.cfg.T);
  write_pi2_cache(path.string(), fam);
  computed = true;
  return fam;
}

int run_pi2(Context& c) {
  bool computed = false;
  const auto fam = obtain_pi2(c, computed);
  bool ok = true;
  for (const auto& m : fam.members) {
    c.out << "T=" << num(m.T) << " residual=" << num(m.residual) << " iterations=" << m.iterations << "\n";
    ok = ok && m.residual <= 1e-9;
  }
  c.out << (computed ? "computed " : "cached ") << (c.cache_dir() / pi2_cache_name(c.cfg.L, c.cfg.h)).string()
        << "\n";
  return ok ? 0 : 1;
}

KdvConfig kdv_config(const RunConfig& cfg, double eps) {
  KdvConfig k;
  k.L_d = cfg.L_d;
  k.eps = eps;
  k.N = cfg.N > 0 ? cfg.N : default_modes(eps);
  k.dt = cfg.dt > 0.0 ? cfg.dt : default_dt(k.L_d, k.N, eps);
  return k;
}

// Evolves each eps through the sorted T list and writes one cache per (eps, T).
int build_kdv_caches(Context& c, const InitialProfile& p, const CatastrophePoint& cp, bool only_missing) {
  const ScalingMap map{cp};
  std::vector<double> Ts = c.cfg.T;
  std::sort(Ts.begin(), Ts.end());
  bool ok = true;
  for (double eps : c.cfg.eps) {
    std::optional<KdvField> field;
    for (double T : Ts) {
      const fs::path path = c.cache_dir() / kdv_cache_name(eps, T);
      if (only_missing && fs::exists(path)) continue;
      if (!field) field = init_field(p, kdv_config(c.cfg, eps));
      const double t = map.t(T, eps);
      if (field->t > t) field = init_field(p, kdv_config(c.cfg, eps));
      field = evolve_converged(*field, t);
      write_kdv_cache(path.string(), *field);
      const double drift = std::max(field->mass_drift(), field->momentum_drift());
      ok = ok && drift < 1e-8;
      c.out << "eps=" << num(eps) << " T=" << num(T) << " t=" << num(t) << " dt=" << num(field->config.dt)
            << " drift=" << num(drift) << "\n";
    }
  }
  return ok ? 0 : 1;
}

int run_kdv(Context& c) {
  const auto p = profile_by_name(c.cfg.profile);
  const auto cp = locate_catastrophe(p);
  return build_kdv_caches(c, p, cp, c.cfg.cache == CachePolicy::use);
}

int run_compare(Context& c) {
  const auto p = profile_by_name(c.cfg.profile);
  const auto cp = locate_catastrophe(p);
  const fs::path pi2_path = c.cache_dir() / pi2_cache_name(c.cfg.L, c.cfg.h);
  std::vector<std::string> missing;
  if (!fs::exists(pi2_path)) missing.push_back(pi2_path.string());
  for (double eps : c.cfg.eps)
    for (double T : c.cfg.T)
      if (!fs::exists(c.cache_dir() / kdv_cache_name(eps, T)))
        missing.push_back((c.cache_dir() / kdv_cache_name(eps, T)).string());

  if (c.cfg.cache == CachePolicy::use && !missing.empty()) {
    c.err << "compare: missing cache files (run pi2 and kdv first, or use cache = rebuild):\n";
    for (const auto& m : missing) c.err << "  " << m << "\n";
    return 1;
  }
  Pi2Family fam;
  if (c.cfg.cache == CachePolicy::rebuild) {
    fam = continuation_in_T(Pi2Grid::with_spacing(c.cfg.L, c.cfg.h), c.cfg.T);
    write_pi2_cache(pi2_path.string(), fam);
    build_kdv_caches(c, p, cp, false);
  } else {
    fam = read_pi2_cache(pi2_path.string());
  }

  const ScalingMap map{cp};
  auto fields = std::make_shared<std::map<std::pair<double, double>, KdvField>>();
  const std::vector<double> Ts = c.cfg.T;
  const fs::path dir = c.cache_dir();
  FieldProvider provider = [&, fields](double eps, double t) -> KdvField {
    for (double T : Ts) {
      if (map.t(T, eps) != t) continue;
      const auto key = std::make_pair(eps, T);
      auto it = fields->find(key);
      if (it == fields->end()) it = fields->emplace(key, read_kdv_cache((dir / kdv_cache_name(eps, T)).string())).first;
      return it->second;
    }
    throw RangeError("compare: no cached field for eps=" + num(eps) + " t=" + num(t));
  };
  const auto rep = universality_compare(p, cp, fam, c.cfg.eps, c.cfg.T, x_window(c.cfg.x_max, c.cfg.x_points),
                                        provider);
  const std::string csv = report_csv(rep);
  write_atomic((c.root() / "compare.csv").string(), csv);
  std::string prof = "eps,X,rescaled,U\n";
  for (const auto& pr : rep.profiles)
    for (std::size_t i = 0; i < pr.X.size(); ++i)
      prof += format_double(pr.eps) + "," + format_double(pr.X[i]) + "," + format_double(pr.rescaled[i]) + "," +
              format_double(pr.limit[i]) + "\n";
  write_atomic((c.root() / "profiles_T0.csv").string(), prof);
  for (const auto& r : rep.rows)
    if (!r.failure.empty()) c.err << "eps=" << num(r.eps) << " T=" << num(r.T) << ": " << r.failure << "\n";
  c.out << csv.substr(csv.rfind("slope="));
  const bool ok = rep.slope && std::abs(*rep.slope - 4.0 / 7.0) <= 0.15;
  return ok ? 0 : 1;
}

}  // namespace

std::string pi2_cache_name(double L, double h) { return "pi2_L" + num(L) + "_h" + num(h) + ".csv"; }

std::string kdv_cache_name(double eps, double T) { return "kdv_eps" + num(eps) + "_T" + num(T) + ".csv"; }

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradient catastrophe and P_I^2 universality toolkit for small-dispersion KdV"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_file;
  std::map<std::string, std::string> flags;
  app.add_option("--config", config_file, "key = value configuration file");
  const std::vector<std::pair<std::string, std::string>> keys = {
      {"profile", "initial profile (sech2, double-gaussian)"},
      {"eps", "comma-separated, strictly decreasing eps ladder"},
      {"T", "comma-separated T list"},
      {"x_max", "half-width of the X window"},
      {"x_points", "points in the X window"},
      {"L", "P_I^2 half-length"},
      {"h", "P_I^2 grid spacing"},
      {"L_d", "KdV box half-length"},
      {"N", "KdV mode count (0 = by eps)"},
      {"dt", "KdV step (auto or a number)"},
      {"output", "output directory"},
      {"cache", "cache policy: use or rebuild"}};
  for (const auto& [key, help] : keys) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    app.add_option_function<std::string>("--" + name, [&flags, key = key](const std::string& v) { flags[key] = v; },
                                          help)->allow_extra_args(false);
  }
  double t_fraction = 0.5;
  app.add_subcommand("catastrophe", "locate the gradient catastrophe");
  app.add_subcommand("hopf", "dispersionless solution before breaking")
      ->add_option("--t-frac", t_fraction, "time as a fraction of t_c");
  app.add_subcommand("phase-check", "phase-function identities at the catastrophe");
  app.add_subcommand("scattering-check", "exact reflection data against the WKB phases");
  app.add_subcommand("pi2", "P_I^2 family on the configured T list");
  app.add_subcommand("kdv", "KdV runs at the mapped times for every eps and T");
  app.add_subcommand("compare", "double-scaling comparison of KdV with P_I^2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) throw ConfigError("cannot read config file " + config_file);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str());
    }
    if (const char* env = std::getenv("BREAKUP_OUTPUT_DIR"); env && *env) cfg.output = env;
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
    validate_config(cfg);
    fs::create_directories(fs::path(cfg.output) / "cache");

    Context c{cfg, out, err};
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "catastrophe") return run_catastrophe(c);
    if (sub == "hopf") return run_hopf(c, t_fraction);
    if (sub == "phase-check") return run_phase_check(c);
    if (sub == "scattering-check") return run_scattering_check(c);
    if (sub == "pi2") return run_pi2(c);
    if (sub == "kdv") return run_kdv(c);
    if (sub == "compare") return run_compare(c);
    err << app.help();
    return 2;
  } catch (const ParseError& e) {
    err << "config: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace breakup
