#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kgfield {

/// Schema violation in a scenario or sweep config (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string out_dir;
  int workers = 1;
  std::optional<unsigned long long> seed;
  /// "csv" or "json"; empty uses the config's output.formats.
  std::string format;
  /// Written into CSV headers only.
  std::string timestamp;
};

/// Parsed and schema-checked config; keeps the source text for hashing.
struct ScenarioConfig {
  nlohmann::json doc;
  std::string text;
  std::string base_dir;
};

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

struct RunResult {
  std::vector<std::string> files;
  nlohmann::ordered_json summary;
};

/// Builds the field, runs the tasks in order and writes CSV grids and summary.json.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

/// Evaluates the sweep observable on every grid point (in parallel) and writes sweep.csv.
RunResult run_sweep(const ScenarioConfig& config, const RunOptions& options);

} // namespace kgfield
