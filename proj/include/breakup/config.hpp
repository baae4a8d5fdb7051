#pragma once

#include <string>
#include <vector>

namespace breakup {

enum class CachePolicy { use, rebuild };

struct RunConfig {
  std::string profile = "sech2";
  std::vector<double> eps = {0.1, 0.07, 0.05, 0.035};
  std::vector<double> T = {-1.0, 0.0, 1.0};
  double x_max = 2.0;
  int x_points = 41;
  double L = 25.0;
  double h = 0.025;
  double L_d = 15.0;
  int N = 0;        // 0: default_modes(eps)
  double dt = 0.0;  // 0: default_dt
  std::string output = "breakup-out";
  CachePolicy cache = CachePolicy::use;
};

/// "key = value" lines with # comments.  Lists are comma separated.
/// Malformed lines raise ParseError, unknown keys ConfigError.
RunConfig parse_config(const std::string& text);

/// Sets one key; shared by the file parser and command-line overrides.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);

/// Numeric positivity, strictly decreasing eps ladder.
void validate_config(const RunConfig& cfg);

std::vector<double> parse_list(const std::string& value, int line = 0);

}  // namespace breakup
