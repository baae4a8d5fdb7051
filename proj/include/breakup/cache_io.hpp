#pragma once

#include <string>

#include "breakup/kdv.hpp"
#include "breakup/pi2.hpp"

namespace breakup {

/// Writes text to path through a temporary file and a rename.
void write_atomic(const std::string& path, const std::string& text);

/// Blocks of "# T=.. L=.. h=.. residual=.." followed by X,U rows.
std::string pi2_cache_text(const Pi2Family& family);
void write_pi2_cache(const std::string& path, const Pi2Family& family);
Pi2Family read_pi2_cache(const std::string& path);

/// "# eps=.. t=.. Ld=.. N=.." plus a line with dt and the reference
/// invariants, then x,u rows.
std::string kdv_cache_text(const KdvField& field);
void write_kdv_cache(const std::string& path, const KdvField& field);
KdvField read_kdv_cache(const std::string& path);

/// Full-precision decimal (17 significant digits).
std::string format_double(double v);

}  // namespace breakup
