#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <unistd.h>

#include "breakup/cache_io.hpp"
#include "breakup/config.hpp"
#include "breakup/errors.hpp"

using namespace breakup;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("breakup_io_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  return dir;
}
}  // namespace

TEST_CASE("config defaults and parsing") {
  const auto d = parse_config("");
  CHECK(d.profile == "sech2");
  CHECK(d.eps == std::vector<double>{0.1, 0.07, 0.05, 0.035});
  CHECK(d.T == std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(d.cache == CachePolicy::use);

  const auto c = parse_config("# comment\neps = 0.1, 0.05\n\nh = 0.02  # trailing\ncache = rebuild\nN = 8192\n");
  CHECK(c.eps == std::vector<double>{0.1, 0.05});
  CHECK(c.h == 0.02);
  CHECK(c.N == 8192);
  CHECK(c.cache == CachePolicy::rebuild);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("eps = 0.05, 0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("colour = blue\n"), ConfigError);
  try {
    parse_config("L = 20\njust words\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_config("h = abc\n"), ParseError);
  CHECK_THROWS_AS(parse_config("cache = sometimes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("x_points = 2.5\n"), ParseError);
}

TEST_CASE("pi2 cache round trip is bit exact") {
  const auto fam = continuation_in_T(Pi2Grid(20.0, 401), {-0.5, 0.0, 0.5});
  const auto path = scratch("pi2") / "nested" / "pi2.csv";
  write_pi2_cache(path.string(), fam);
  const auto back = read_pi2_cache(path.string());
  REQUIRE(back.members.size() == fam.members.size());
  for (std::size_t m = 0; m < fam.members.size(); ++m) {
    CHECK(back.members[m].T == fam.members[m].T);
    CHECK(back.members[m].U == fam.members[m].U);
    CHECK(back.members[m].grid.X == fam.members[m].grid.X);
    CHECK(back.members[m].residual == fam.members[m].residual);
  }
  CHECK(pi2_cache_text(back) == pi2_cache_text(fam));
}

TEST_CASE("kdv cache round trip is bit exact") {
  KdvConfig cfg;
  cfg.eps = 0.1;
  cfg.N = 4096;
  cfg.dt = default_dt(cfg.L_d, cfg.N, cfg.eps);
  const auto f = evolve(init_field(sech2_profile(), cfg), 0.05);
  const auto path = scratch("kdv") / "kdv.csv";
  write_kdv_cache(path.string(), f);
  const auto g = read_kdv_cache(path.string());
  CHECK(g.u == f.u);
  CHECK(g.t == f.t);
  CHECK(g.eps == f.eps);
  CHECK(g.config.N == f.config.N);
  CHECK(g.config.dt == f.config.dt);
  CHECK(g.mass0 == f.mass0);
  CHECK(g.momentum0 == f.momentum0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("# eps=", 0) == 0);
}

TEST_CASE("malformed caches") {
  const auto dir = scratch("bad");
  write_atomic((dir / "a.csv").string(), "# eps=0.1 t=0 Ld=15\n");
  CHECK_THROWS_AS(read_kdv_cache((dir / "a.csv").string()), ParseError);
  write_atomic((dir / "b.csv").string(), "1,2\n");
  CHECK_THROWS_AS(read_pi2_cache((dir / "b.csv").string()), ParseError);
  CHECK_THROWS_AS(read_pi2_cache((dir / "missing.csv").string()), ConfigError);
}

TEST_CASE("full precision formatting") {
  for (double v : {0.1, 1.0 / 3.0, -2.0 / 3.0, 1e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
}
