#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "kgfield/csv.hpp"
#include "kgfield/core.hpp"
#include "kgfield/scenario.hpp"
#include "kgfield/state_io.hpp"
#include "kgfield/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kConfig = 2;

struct Common {
  std::string out;
  int workers = 1;
  std::optional<unsigned long long> seed;
  std::string format;
};

std::string out_dir(const Common& c) {
  if (const char* env = std::getenv("KGFIELD_OUT"); env && *env) return env;
  return c.out;
}

kgfield::RunOptions run_options(const Common& c) {
  kgfield::RunOptions o;
  o.out_dir = out_dir(c);
  o.workers = c.workers;
  o.seed = c.seed;
  o.format = c.format;
  o.timestamp = kgfield::utc_timestamp();
  return o;
}

int cmd_verify(const Common& c, const std::string& suite, const std::string& fault) {
  kgfield::VerifyOptions o;
  o.suite = suite;
  o.fault = fault;
  if (c.seed) o.seed = *c.seed;
  kgfield::VerifyReport report;
  try {
    report = kgfield::run_verify(o);
  } catch (const kgfield::PreconditionError& e) {
    std::cerr << "kgfield: " << e.what() << '\n';
    return kConfig;
  }
  const std::string json = report.to_json();
  std::cout << json << '\n';
  if (const std::string dir = out_dir(c); !dir.empty()) {
    std::filesystem::create_directories(dir);
    std::ofstream(std::filesystem::path(dir) / "verify.json") << json << '\n';
  }
  for (const auto& r : report.results)
    if (!r.passed) std::cerr << "FAIL " << r.suite << '.' << r.check << ": measured " << r.measured << '\n';
  return report.all_passed() ? kOk : kFailed;
}

template <class Run>
int cmd_run(const Common& c, const std::string& path, Run run) {
  try {
    const kgfield::ScenarioConfig cfg = kgfield::load_config(path);
    const kgfield::RunResult r = run(cfg, run_options(c));
    for (const auto& f : r.files) std::cout << f << '\n';
    return kOk;
  } catch (const kgfield::ConfigError& e) {
    std::cerr << "kgfield: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "kgfield: " << e.what() << '\n';
    return kFailed;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon field inner products, currents and checks"};
  app.set_version_flag("--version", std::string(kgfield::kToolVersion));
  app.require_subcommand(1);

  Common c;
  unsigned long long seed = 0;
  app.add_option("--out", c.out, "Output directory (KGFIELD_OUT overrides)");
  app.add_option("--workers", c.workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed override");
  app.add_option("--format", c.format, "Restrict output to csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string suite, fault, scenario_path, sweep_path, state_path;
  auto* verify = app.add_subcommand("verify", "Run invariant suites and print a JSON report");
  verify->add_option("--suite", suite, "Run one suite only");
  verify->add_option("--inject-fault", fault, "Corrupt the constant behind SUITE.CHECK");
  bool list = false;
  verify->add_flag("--list", list, "List suites and checks");

  auto* scenario = app.add_subcommand("scenario", "Run a scenario config");
  scenario->add_option("file", scenario_path)->required();
  auto* sweep = app.add_subcommand("sweep", "Run a sweep config");
  sweep->add_option("file", sweep_path)->required();
  auto* state = app.add_subcommand("state", "Field-state files");
  state->require_subcommand(1);
  auto* inspect = state->add_subcommand("inspect", "Print a JSON description of a state file");
  inspect->add_option("file", state_path)->required();

  // options may follow the subcommand
  for (auto* sub : {verify, scenario, sweep})
    sub->fallthrough();
  state->fallthrough();
  inspect->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  if (*seed_opt) c.seed = seed;

  if (*verify) {
    if (list) {
      for (const auto& name : kgfield::verify_checks()) std::cout << name << '\n';
      return kOk;
    }
    return cmd_verify(c, suite, fault);
  }
  if (*scenario) return cmd_run(c, scenario_path, kgfield::run_scenario);
  if (*sweep) return cmd_run(c, sweep_path, kgfield::run_sweep);
  try {
    std::cout << kgfield::inspect_state(state_path) << '\n';
    return kOk;
  } catch (const kgfield::PreconditionError& e) {
    std::cerr << "kgfield: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "kgfield: " << e.what() << '\n';
    return kFailed;
  }
}
