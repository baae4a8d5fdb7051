#include "breakup/cache_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "breakup/errors.hpp"

namespace breakup {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cache file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// key=value pairs of a "# a=1 b=2" header line.
std::map<std::string, std::string> header_fields(const std::string& line, int lineno) {
  std::map<std::string, std::string> out;
  std::istringstream ss(line.substr(1));
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("bad header token '" + tok + "'", lineno);
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

double to_double(const std::string& s, int lineno) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'", lineno);
  }
  if (pos != s.size()) throw ParseError("not a number: '" + s + "'", lineno);
  return v;
}

const std::string& need(const std::map<std::string, std::string>& m, const std::string& key, int lineno) {
  const auto it = m.find(key);
  if (it == m.end()) throw ParseError("header lacks '" + key + "'", lineno);
  return it->second;
}

std::pair<double, double> csv_pair(const std::string& line, int lineno) {
  const auto comma = line.find(',');
  if (comma == std::string::npos) throw ParseError("expected two comma-separated values", lineno);
  return {to_double(line.substr(0, comma), lineno), to_double(line.substr(comma + 1), lineno)};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string pi2_cache_text(const Pi2Family& family) {
  std::string out;
  for (const auto& m : family.members) {
    out += "# T=" + format_double(m.T) + " L=" + format_double(m.grid.L) + " h=" + format_double(m.grid.h) +
           " residual=" + format_double(m.residual) + "\n";
    for (int i = 0; i < m.grid.n; ++i) out += format_double(m.grid.X[i]) + "," + format_double(m.U[i]) + "\n";
  }
  return out;
}

void write_pi2_cache(const std::string& path, const Pi2Family& family) {
  write_atomic(path, pi2_cache_text(family));
}

Pi2Family read_pi2_cache(const std::string& path) {
  std::istringstream in(slurp(path));
  Pi2Family fam;
  std::string line;
  int lineno = 0;
  Pi2Solution* cur = nullptr;
  std::vector<double> xs;
  auto finish = [&]() {
    if (!cur) return;
    if (xs.size() < 9) throw ParseError("pi2 block with too few rows", lineno);
    cur->grid = Pi2Grid(xs.back(), int(xs.size()));
    cur->grid.X = xs;
    xs.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      finish();
      const auto h = header_fields(line, lineno);
      fam.members.emplace_back();
      cur = &fam.members.back();
      cur->T = to_double(need(h, "T", lineno), lineno);
      cur->residual = to_double(need(h, "residual", lineno), lineno);
      continue;
    }
    if (!cur) throw ParseError("data row before any header", lineno);
    const auto [x, u] = csv_pair(line, lineno);
    xs.push_back(x);
    cur->U.push_back(u);
  }
  finish();
  if (fam.members.empty()) throw ParseError("empty pi2 cache", lineno);
  fam.grid = fam.members.front().grid;
  return fam;
}

std::string kdv_cache_text(const KdvField& f) {
  std::string out = "# eps=" + format_double(f.eps) + " t=" + format_double(f.t) +
                    " Ld=" + format_double(f.config.L_d) + " N=" + std::to_string(f.config.N) + "\n";
  out += "# dt=" + format_double(f.config.dt) + " dealias=" + format_double(f.config.dealias) +
         " mass0=" + format_double(f.mass0) + " momentum0=" + format_double(f.momentum0) + "\n";
  for (int i = 0; i < f.config.N; ++i) out += format_double(f.x(i)) + "," + format_double(f.u[i]) + "\n";
  return out;
}

void write_kdv_cache(const std::string& path, const KdvField& field) {
  write_atomic(path, kdv_cache_text(field));
}

KdvField read_kdv_cache(const std::string& path) {
  std::istringstream in(slurp(path));
  KdvField f;
  std::string line;
  int lineno = 0, headers = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto h = header_fields(line, lineno);
      if (headers == 0) {
        f.eps = to_double(need(h, "eps", lineno), lineno);
        f.t = to_double(need(h, "t", lineno), lineno);
        f.config.eps = f.eps;
        f.config.L_d = to_double(need(h, "Ld", lineno), lineno);
        f.config.N = int(to_double(need(h, "N", lineno), lineno));
      } else {
        f.config.dt = to_double(need(h, "dt", lineno), lineno);
        f.config.dealias = to_double(need(h, "dealias", lineno), lineno);
        f.mass0 = to_double(need(h, "mass0", lineno), lineno);
        f.momentum0 = to_double(need(h, "momentum0", lineno), lineno);
      }
      ++headers;
      continue;
    }
    f.u.push_back(csv_pair(line, lineno).second);
  }
  if (headers < 2) throw ParseError("kdv cache lacks its header lines", lineno);
  if (int(f.u.size()) != f.config.N) throw ParseError("kdv cache row count differs from N", lineno);
  return f;
}

}  // namespace breakup
