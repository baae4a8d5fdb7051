#include "breakup/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "breakup/errors.hpp"

namespace breakup {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double number(const std::string& s, int line) {
  const std::string t = trim(s);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &pos);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + t + "'", line);
  }
  if (pos != t.size()) throw ParseError("not a number: '" + t + "'", line);
  return v;
}

int integer(const std::string& s, int line) {
  const double v = number(s, line);
  if (v != double(int(v))) throw ParseError("not an integer: '" + trim(s) + "'", line);
  return int(v);
}

}  // namespace

std::vector<double> parse_list(const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(item, line));
  if (out.empty()) throw ParseError("empty list", line);
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line) {
  const std::string v = trim(value);
  if (key == "profile") cfg.profile = v;
  else if (key == "eps") cfg.eps = parse_list(v, line);
  else if (key == "T") cfg.T = parse_list(v, line);
  else if (key == "x_max") cfg.x_max = number(v, line);
  else if (key == "x_points") cfg.x_points = integer(v, line);
  else if (key == "L") cfg.L = number(v, line);
  else if (key == "h") cfg.h = number(v, line);
  else if (key == "L_d") cfg.L_d = number(v, line);
  else if (key == "N") cfg.N = integer(v, line);
  else if (key == "dt") cfg.dt = v == "auto" ? 0.0 : number(v, line);
  else if (key == "output") cfg.output = v;
  else if (key == "cache") {
    if (v == "use") cfg.cache = CachePolicy::use;
    else if (v == "rebuild") cfg.cache = CachePolicy::rebuild;
    else throw ConfigError("cache must be 'use' or 'rebuild', got '" + v + "'");
  } else {
    throw ConfigError("unknown key '" + key + "'" + (line > 0 ? " on line " + std::to_string(line) : ""));
  }
}

void validate_config(const RunConfig& cfg) {
  if (cfg.eps.empty()) throw ConfigError("eps ladder is empty");
  for (double e : cfg.eps)
    if (!(e > 0.0)) throw ConfigError("eps values must be positive");
  for (std::size_t i = 1; i < cfg.eps.size(); ++i)
    if (!(cfg.eps[i] < cfg.eps[i - 1])) throw ConfigError("eps ladder must be strictly decreasing");
  if (cfg.T.empty()) throw ConfigError("T list is empty");
  if (!(cfg.x_max > 0.0) || cfg.x_points < 2) throw ConfigError("x_max must be positive, x_points >= 2");
  if (!(cfg.L > 0.0 && cfg.h > 0.0 && cfg.L_d > 0.0)) throw ConfigError("L, h, L_d must be positive");
  if (cfg.N < 0 || cfg.dt < 0.0) throw ConfigError("N and dt must be positive (0 selects the default)");
  if (cfg.output.empty()) throw ConfigError("output directory is empty");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError("missing key", line);
    apply_setting(cfg, key, s.substr(eq + 1), line);
  }
  validate_config(cfg);
  return cfg;
}

}  // namespace breakup
