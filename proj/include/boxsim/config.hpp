#pragma once
#include <string>
#include <vector>

#include <json.hpp>

#include "boxsim/sweep.hpp"

namespace boxsim {

struct OutputConfig {
  std::string dir = ".";
  std::string csv = "results.csv";
  std::string metadata = "metadata.json";
  bool gnuplot = false;
};

struct ReportConfig {
  bool cooling = false;
  double epsilon = kDefaultEpsilon;
};

// A fully validated scenario: one run, optionally a sweep over axes and/or a
// trajectory comparison. `resolved` echoes the config with every default
// materialized; it is embedded in the output metadata so runs are
// reproducible from artifacts alone.
struct ScenarioConfig {
  RunSpec run;
  std::vector<AxisSpec> axes;  // empty = plain ensemble run
  int refine_rounds = 0;
  std::int64_t sweep_budget = 10'000'000'000;
  std::vector<BoxTrajectory> compare;  // non-empty = comparison table
  double speed_limit = kDefaultSpeedLimit;
  int threads = 0;
  bool histogram = false;
  ReportConfig report;
  OutputConfig output;
  nlohmann::json resolved;
};

// Throws std::invalid_argument with a JSON-pointer-addressed message for
// domain violations; JSON syntax errors surface as nlohmann::json::parse_error
// with byte offsets.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

BoxTrajectory parse_trajectory(const nlohmann::json& j, const TrapSpec& trap,
                               double w_B, double default_t_f,
                               const std::string& where);
nlohmann::json trajectory_to_json(const BoxTrajectory& traj);

// Executes the scenario and writes the CSV/metadata (and optional gnuplot
// .dat) artifacts. Returns a process exit code; nonzero when tallied trial
// anomalies exceed 0.1% of trials.
int run_scenario(const ScenarioConfig& cfg, const std::string& command_line);

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace boxsim
