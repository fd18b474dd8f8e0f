#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <string>

#include "equiflow/config.hpp"
#include "equiflow/pipeline.hpp"

using namespace equiflow;

namespace {

struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& body) : path(name) {
    std::ofstream out(path);
    out << body;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parsing") {
  TempFile f("test_cfg_basic.cfg",
             "# header comment\n"
             "group.n = 3\n"
             "\n"
             "potential.a = 1.0, 0.0  # trailing comment\n"
             "flow.tol_rate=1e-7\n"
             "output.dir = out dir with spaces\n");
  Config c = parse_config_file(f.path);
  REQUIRE(c.has("group.n"));
  REQUIRE(c.get_int("group.n", 0) == 3);
  REQUIRE_FALSE(c.has("# header comment"));
  std::vector<double> a = c.get_list("potential.a");
  REQUIRE(a.size() == 2);
  REQUIRE(a[0] == 1.0);
  REQUIRE(a[1] == 0.0);
  REQUIRE(c.get_double("flow.tol_rate", 0) == 1e-7);
  REQUIRE(c.get("output.dir", "") == "out dir with spaces");
  REQUIRE(c.get("missing.key", "fallback") == "fallback");
}

TEST_CASE("config syntax errors carry path and line number") {
  TempFile f("test_cfg_bad.cfg", "group.n = 3\nnot a key value line\n");
  try {
    parse_config_file(f.path);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    REQUIRE(msg.find("test_cfg_bad.cfg:2") != std::string::npos);
    REQUIRE(msg.find("expected key=value") != std::string::npos);
  }
}

TEST_CASE("typed getters reject malformed values with line numbers") {
  TempFile f("test_cfg_types.cfg",
             "x.num = abc\n"
             "x.int = 3.5\n"
             "x.bool = maybe\n"
             "x.list = 1.0, zzz\n");
  Config c = parse_config_file(f.path);
  for (const char* key : {"x.num", "x.int", "x.bool", "x.list"}) {
    try {
      if (std::string(key) == "x.num") c.get_double(key, 0);
      if (std::string(key) == "x.int") c.get_int(key, 0);
      if (std::string(key) == "x.bool") c.get_bool(key, false);
      if (std::string(key) == "x.list") c.get_list(key);
      FAIL("expected ConfigError for " << key);
    } catch (const ConfigError& e) {
      std::string msg = e.what();
      INFO(msg);
      REQUIRE(msg.find("test_cfg_types.cfg:") != std::string::npos);
      REQUIRE(msg.find(key) != std::string::npos);
    }
  }
  REQUIRE(c.get_bool("x.missing", true));
}

TEST_CASE("run config validation") {
  SECTION("missing potential.a") {
    TempFile f("test_cfg_noa.cfg", "hom.name = identity\n");
    Config c = parse_config_file(f.path);
    REQUIRE_THROWS_AS(load_run_config(c), ConfigError);
  }
  SECTION("bad potential.kind") {
    TempFile f("test_cfg_kind.cfg",
               "potential.kind = quartic\npotential.a = 1\n");
    Config c = parse_config_file(f.path);
    REQUIRE_THROWS_AS(load_run_config(c), ConfigError);
  }
  SECTION("bad domain.kind") {
    TempFile f("test_cfg_dom.cfg",
               "potential.a = 1\ndomain.kind = torus\n");
    Config c = parse_config_file(f.path);
    REQUIRE_THROWS_AS(load_run_config(c), ConfigError);
  }
  SECTION("wrong minimum dimension is caught at assembly") {
    TempFile f("test_cfg_dim.cfg",
               "hom.name = identity\n"
               "group.name = Dn\n"
               "group.n = 3\n"
               "potential.a = 1, 0, 0\n");
    Config c = parse_config_file(f.path);
    RunConfig rc = load_run_config(c);
    REQUIRE_THROWS_AS(build_assembly(rc), ConfigError);
  }
  SECTION("cell domain needs a discrete source") {
    TempFile f("test_cfg_cell.cfg",
               "hom.name = identity\n"
               "group.name = Dn\n"
               "group.n = 3\n"
               "potential.a = 1, 0\n"
               "domain.kind = cell\n");
    Config c = parse_config_file(f.path);
    RunConfig rc = load_run_config(c);
    REQUIRE_THROWS_AS(build_assembly(rc), ConfigError);
  }
  SECTION("a well formed config assembles") {
    TempFile f("test_cfg_ok.cfg",
               "hom.name = identity\n"
               "group.name = Dn\n"
               "group.n = 3\n"
               "potential.a = 1, 0\n"
               "domain.R = 2\n"
               "domain.h = 0.25\n");
    Config c = parse_config_file(f.path);
    RunConfig rc = load_run_config(c);
    Assembly A = build_assembly(rc);
    REQUIRE(A.grid->node_count() > 0);
    REQUIRE(A.scale_c == 1.0);
    REQUIRE(A.reg.f.target.order() == 6);
  }
}
