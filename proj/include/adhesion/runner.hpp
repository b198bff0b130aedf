#pragma once

#include "adhesion/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace adhesion {

struct RunOverrides {
  double step = 0.0;  // > 0 replaces time.step
  double tol = 0.0;   // > 0 replaces the activation tolerance
};

struct RunResult {
  int exit_code = 0;        // 0 ok, 1 invariant failure
  nlohmann::json manifest;  // files with byte counts and SHA-256
  std::string message;      // names the violated invariants
};

/// Executes the scenario and writes trajectories.csv, shock_<tau>.svg,
/// report.json and manifest.json into out_dir (created when missing).
RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                       const RunOverrides& overrides = {});

std::string sha256_hex(const std::string& bytes);

}  // namespace adhesion
