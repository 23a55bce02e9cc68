#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kgfield/scenario.hpp"
#include "kgfield/state_io.hpp"
#include "kgfield/random_fields.hpp"
#include "kgfield/verify.hpp"

using namespace kgfield;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kgfield_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string body(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# generated:", 0) != 0) out += line + "\n";
  return out;
}

const char* kPacket = R"({"seed": 4,
 "model": {"d": 1, "L": 30, "N": 64, "M": 1, "kappa": 1, "a": 0.2},
 "field": {"construction": "gaussian-packet", "k0": [0.5], "sigma": 2},
 "tasks": [{"task": "rho_a", "times": [0, 1, 2, 3, 4]}, {"task": "total_probability", "times": [0, 1, 2, 3, 4]}]})";

int run_cli(const std::string& args) {
  const int status = std::system((std::string(KGFIELD_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("schema: unknown keys are rejected at every level") {
  const std::vector<std::string> bad{
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"}, "extra": 1})",
      R"({"model": {"d": 1, "L": 10, "N": 16, "mass": 1}, "field": {"construction": "random"}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random", "width": 2}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"}, "tasks": [{"task": "inner_a", "t": [0]}]})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"}, "output": {"dir": "x"}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"},
          "sweep": {"axis": "a", "range": {"from": 0, "to": 1, "count": 3, "step": 1}, "observable": "inner_a"}})",
      R"({"model": {"d": 1}, "field": {"construction": "plane-waves", "modes": [{"epsilon": 1, "k": [0], "phase": 0}]}})",
  };
  for (const auto& text : bad) CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("schema: types, enums and required keys") {
  const std::vector<std::string> bad{
      "not json",
      R"({"model": {"d": 1, "L": 10, "N": 16}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "spiral"}})",
      R"({"model": {"d": 1, "L": "ten", "N": 16}, "field": {"construction": "random"}})",
      R"({"model": {"d": 1, "L": 10, "N": 16.5}, "field": {"construction": "random"}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"}, "tasks": [{"task": "teleport"}]})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"},
          "sweep": {"axis": "theta", "values": [1], "observable": "inner_a"}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"},
          "sweep": {"axis": "a", "values": [1], "ladder": {"M0": 1}, "observable": "inner_a"}})",
      R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "gaussian-packet", "preparation": "warm"}})",
  };
  for (const auto& text : bad) CHECK_THROWS_AS(parse_config(text), ConfigError);
  CHECK_NOTHROW(parse_config(kPacket));
}

TEST_CASE("scenario: CSV per time, constant total probability, deterministic output") {
  const fs::path d1 = scratch("s1"), d2 = scratch("s2");
  RunOptions o;
  o.out_dir = d1.string();
  o.timestamp = "2026-01-01T00:00:00Z";
  const RunResult r = run_scenario(parse_config(kPacket), o);
  CHECK(r.files.size() == 7);
  const auto& vals = r.summary["results"][1]["values"];
  REQUIRE(vals.size() == 5);
  const double p0 = vals[0]["total_probability"].get<double>();
  for (const auto& v : vals) CHECK(v["total_probability"].get<double>() == doctest::Approx(p0).epsilon(1e-12));
  CHECK(r.summary["parameters"]["model"]["a"].get<double>() == 0.2);

  o.out_dir = d2.string();
  o.timestamp = "2030-05-05T00:00:00Z";
  run_scenario(parse_config(kPacket), o);
  for (const auto& e : fs::directory_iterator(d1)) {
    if (e.path().extension() == ".csv") CHECK(body(e.path()) == body(d2 / e.path().filename()));
    else CHECK(slurp(e.path()) == slurp(d2 / e.path().filename()));
  }
  const std::string csv = slurp(d1 / "task001_total_probability.csv");
  CHECK(csv.find("# tool: kgfield 1.0.0") == 0);
  CHECK(csv.find("# config_hash: ") != std::string::npos);
  CHECK(csv.find("# param model.N = 64") != std::string::npos);
}

TEST_CASE("scenario: precondition failures surface as exceptions, not config errors") {
  const char* text = R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"},
                         "tasks": [{"task": "two_mode_oracle"}]})";
  RunOptions o;
  o.out_dir = scratch("pre").string();
  CHECK_THROWS_AS(run_scenario(parse_config(text), o), PreconditionError);
}

TEST_CASE("scenario: from-file construction reads a saved state") {
  const fs::path d = scratch("ff");
  Rng rng(3);
  save_state((d / "f.state").string(), random_field(Lattice::cube(1, 8.0, 32), ModelParams(1, 1, 0.1), rng));
  std::ofstream(d / "cfg.json") << R"({"field": {"construction": "from-file", "path": "f.state"},
                                       "tasks": [{"task": "inner_a"}], "output": {"formats": ["json"]}})";
  RunOptions o;
  o.out_dir = (d / "out").string();
  const RunResult r = run_scenario(load_config((d / "cfg.json").string()), o);
  CHECK(r.files.size() == 1);
  CHECK(r.summary["results"][0]["values"][0]["total_probability"].get<double>() > 0);
}

TEST_CASE("sweep over a: total probability follows the split formula; workers do not change output") {
  const char* text = R"({"seed": 9, "model": {"d": 1, "L": 20, "N": 64, "M": 1.5, "kappa": 2},
    "field": {"construction": "random"},
    "sweep": {"axis": "a", "range": {"from": -0.9, "to": 0.9, "count": 9}, "observable": "total_probability"}})";
  RunOptions o;
  o.timestamp = "x";
  o.out_dir = scratch("w1").string();
  o.workers = 1;
  const RunResult r1 = run_sweep(parse_config(text), o);
  o.out_dir = scratch("w4").string();
  o.workers = 4;
  const RunResult r4 = run_sweep(parse_config(text), o);
  CHECK(r1.summary == r4.summary);
  const auto& rows = r1.summary["results"][0]["rows"];
  REQUIRE(rows.size() == 9);
  // linear in a: kappa[(1+a)Q+ + (1-a)Q-] with Q+- > 0
  const double lo = rows[0][1].get<double>(), hi = rows[8][1].get<double>();
  for (std::size_t i = 0; i < 9; ++i) {
    const double a = rows[i][0].get<double>();
    CHECK(rows[i][1].get<double>() == doctest::Approx(rows[i][2].get<double>()).epsilon(1e-12));
    CHECK(rows[i][1].get<double>() == doctest::Approx(lo + (hi - lo) * (a + 0.9) / 1.8).epsilon(1e-12));
  }
}

TEST_CASE("sweep over M: slope footer") {
  const char* text = R"({"model": {"d": 1, "L": 40, "N": 256, "M": 1},
    "field": {"construction": "gaussian-packet", "k0": [2], "sigma": 1},
    "sweep": {"axis": "M", "ladder": {"M0": 16, "count": 6}, "observable": "limit_deviation"}})";
  RunOptions o;
  o.out_dir = scratch("m").string();
  o.workers = 3;
  const RunResult r = run_sweep(parse_config(text), o);
  CHECK(r.summary["results"][0]["slope_rel_dev_j"].get<double>() == doctest::Approx(-2.0).epsilon(0.1));
  CHECK(slurp(fs::path(o.out_dir) / "sweep.csv").find("# slope rel_dev_j = ") != std::string::npos);
}

TEST_CASE("verify: suites pass, and every injected fault is reported by name") {
  VerifyOptions o;
  o.suite = "currents";
  CHECK(run_verify(o).all_passed());
  for (const auto& name : verify_checks()) {
    VerifyOptions f;
    f.suite = name.substr(0, name.find('.'));
    f.fault = name;
    const VerifyReport rep = run_verify(f);
    bool named = false;
    for (const auto& c : rep.results)
      if (c.suite + "." + c.check == name) named = !c.passed;
    CHECK_MESSAGE(named, name);
  }
  CHECK_THROWS_AS(run_verify({"nope", "", 1}), PreconditionError);
  CHECK_THROWS_AS(run_verify({"", "currents.nope", 1}), PreconditionError);
}

TEST_CASE("CLI exit codes") {
  const fs::path d = scratch("cli");
  std::ofstream(d / "ok.json") << kPacket;
  std::ofstream(d / "bad.json") << R"({"model": {"d": 1, "L": 10, "N": 16, "oops": 0}, "field": {"construction": "random"}})";
  std::ofstream(d / "pre.json") << R"({"model": {"d": 1, "L": 10, "N": 16}, "field": {"construction": "random"},
                                       "tasks": [{"task": "invariance"}]})";
  const std::string out = " --out " + (d / "out").string() + " ";
  CHECK(run_cli(out + "scenario " + (d / "ok.json").string()) == 0);
  CHECK(run_cli(out + "scenario " + (d / "bad.json").string()) == 2);
  CHECK(run_cli(out + "scenario " + (d / "pre.json").string()) == 1);
  CHECK(run_cli(out + "scenario " + (d / "missing.json").string()) == 2);
  CHECK(run_cli("verify --suite gauge-symmetry") == 0);
  CHECK(run_cli("verify --suite currents --inject-fault currents.reference_Ksq") == 1);
  CHECK(run_cli("verify --suite nope") == 2);
  CHECK(run_cli("--format yaml verify") == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("state inspect " + (d / "ok.json").string()) == 2);

  // KGFIELD_OUT wins over --out
  const fs::path env = d / "env";
  const std::string cmd = "KGFIELD_OUT=" + env.string() + " " + KGFIELD_CLI + out + "scenario " +
                          (d / "ok.json").string() + " >/dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(env / "summary.json"));
}

TEST_CASE("shipped example configs are accepted") {
  for (const auto& e : fs::directory_iterator(fs::path(KGFIELD_SOURCE_DIR) / "configs"))
    CHECK_NOTHROW(load_config(e.path().string()));
}
