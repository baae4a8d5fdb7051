#pragma once

#include <iosfwd>
#include <string>

namespace breakup {

/// Subcommands: catastrophe, hopf, phase-check, scattering-check, pi2, kdv,
/// compare.  Exit status 0 on success, 1 on validation failure, 2 on usage
/// error.  BREAKUP_OUTPUT_DIR overrides the configured output root; command
/// line flags override both.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Cache file names under <output>/cache.
std::string pi2_cache_name(double L, double h);
std::string kdv_cache_name(double eps, double T);

}  // namespace breakup
