#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rse/runner.hpp"

using namespace rse;
using nlohmann::json;

namespace {

json small_config() {
  return json::parse(R"({
    "space": {"n": 1, "m": 1, "q": 2.0, "r": 2.0},
    "base_map": {"id": "koebe"},
    "gamma": {"kind": "jacobian-power", "alpha": [0.5, 0.0]},
    "motion": {"kind": "linear", "A": [[[1.0, 0.0]]]},
    "checks": ["derive-c", "profile-ratio-monotone"],
    "sampler": {"samples": 60, "seed": 11, "t_points": 6}
  })");
}

}  // namespace

TEST_SUITE("runner") {

TEST_CASE("matrix parsing accepts nested and flat layouts") {
  json nested = json::parse("[[[1.0,0.0],[2.0,-1.0]],[[0.0,0.5],[3.0,0.0]]]");
  json flat = json::parse("[[1.0,0.0],[2.0,-1.0],[0.0,0.5],[3.0,0.0]]");
  Mat a = matrix_from_json(nested);
  Mat b = matrix_from_json(flat);
  CHECK((a - b).norm() < 1e-15);
  CHECK(a.rows() == 2);
  CHECK(std::abs(a(0, 1) - Cx(2.0, -1.0)) < 1e-15);
  CHECK_THROWS_AS((void)matrix_from_json(json::parse("[[1.0,0.0],[2.0,0.0],[3.0,0.0]]")),
                  ConfigError);
}

TEST_CASE("vectors parse complex pairs and bare reals") {
  Vec v = vector_from_json(json::parse("[[1.0,2.0],[3.0,-4.0]]"));
  CHECK(v.size() == 2);
  CHECK(std::abs(v(1) - Cx(3.0, -4.0)) < 1e-15);
  Vec w = vector_from_json(json::parse("[0.5, 1.5]"));
  CHECK(std::abs(w(0) - Cx(0.5, 0.0)) < 1e-15);
}

TEST_CASE("unknown identifiers are configuration errors") {
  CHECK_THROWS_AS((void)base_map_from_json(json("no-such-map")), ConfigError);
  CHECK_THROWS_AS((void)gamma_from_json(json::parse(R"({"kind":"mystery"})")), ConfigError);
  json bad_check = small_config();
  bad_check["checks"] = {"not-a-check"};
  CHECK_THROWS_AS((void)parse_experiment(bad_check), ConfigError);
  json bad_motion = small_config();
  bad_motion["motion"] = {{"kind", "rotate"}};
  CHECK_THROWS_AS((void)parse_experiment(bad_motion), ConfigError);
}

TEST_CASE("classical parameter ranges surface as configuration errors") {
  CHECK_THROWS_AS((void)gamma_from_json(json::parse(R"({"kind":"gkk","alpha":0.9})")),
                  ConfigError);
  CHECK_THROWS_AS((void)gamma_from_json(json::parse(R"({"kind":"gk","beta":-0.1})")),
                  ConfigError);
  CHECK_NOTHROW((void)gamma_from_json(json::parse(R"({"kind":"gkk","alpha":0.5})")));
}

TEST_CASE("experiments parse their sections") {
  Experiment exp = parse_experiment(small_config());
  CHECK(exp.space.n == 1);
  CHECK(exp.base_map().label() == "koebe");
  CHECK(exp.gamma_spec().kind() == GammaSpec::Kind::jacobian_power);
  CHECK(exp.motion_kind == "linear");
  REQUIRE(exp.motion_A.has_value());
  CHECK(exp.checks.size() == 2);
  CHECK(exp.sampler.samples == 60);
  CHECK(exp.sampler.seed == 11);
}

TEST_CASE("missing sections fail only when a check needs them") {
  json cfg = small_config();
  cfg.erase("gamma");
  cfg["checks"] = {"spirallike"};
  Experiment exp = parse_experiment(cfg);
  RunReport run = run_experiment(exp, "");
  CHECK(run.exit_status == 0);  // spirallike needs no multiplier section
  CHECK_THROWS_AS((void)exp.gamma_spec(), ConfigError);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  Experiment exp = parse_experiment(small_config());
  RunReport a = run_experiment(exp, "");
  RunReport b = run_experiment(exp, "");
  CHECK(a.payload.dump() == b.payload.dump());
  CHECK(a.exit_status == 0);
}

TEST_CASE("violations drive the exit status") {
  json cfg = json::parse(R"({
    "space": {"n": 1, "m": 1},
    "base_map": {"id": "koebe"},
    "motion": {"kind": "shift", "tau": [[-1.0, 0.0]]},
    "checks": ["convex-in-direction"],
    "sampler": {"samples": 50, "seed": 5, "t_points": 8}
  })");
  RunReport run = run_experiment(parse_experiment(cfg), "");
  CHECK(run.exit_status == 1);
  CHECK(run.payload["reports"][0]["verdict"] == "violation");
}

TEST_CASE("the catalog lists the shipped identifiers") {
  json cat = list_catalog();
  auto has_id = [&](const char* section, const std::string& id) {
    for (const auto& e : cat[section]) {
      if (e["id"] == id) return true;
    }
    return false;
  };
  CHECK(has_id("base_maps", "koebe"));
  CHECK(has_id("gamma_variants", "jacobian-power"));
  CHECK(has_id("motions", "affine"));
  CHECK(cat["checks"].size() == 12);
}

TEST_CASE("atomic writes replace the target and leave no temp file") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "rse-runner-test";
  fs::create_directories(dir);
  fs::path target = dir / "out.txt";
  write_atomic(target.string(), "first");
  write_atomic(target.string(), "second");
  std::ifstream in(target);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK_FALSE(fs::exists(target.string() + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("curve tables render csv with full precision") {
  CurveTable t;
  t.columns = {"t", "coord0_re", "margin"};
  t.rows = {{0.0, 0.1, 1.0 / 3.0}};
  std::string csv = csv_from_table(t);
  CHECK(csv.substr(0, 21) == "t,coord0_re,margin\n0,");
  CHECK(csv.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("manifold artifacts land in the output directory") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "rse-artifact-test";
  fs::create_directories(dir);
  json cfg = small_config();
  cfg["checks"] = {"manifold-export"};
  cfg["manifold"] = {{"fan", {0.5, 1.0}}};
  RunReport run = run_experiment(parse_experiment(cfg), dir.string());
  CHECK(run.exit_status == 0);
  CHECK(fs::exists(dir / "manifold-linear.csv"));
  fs::remove_all(dir);
}

}  // TEST_SUITE
