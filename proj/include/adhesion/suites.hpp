#pragma once

#include "adhesion/fourier_series.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adhesion {

struct ConvergenceSettings {
  double T = 2.0;                  // potential comparison time
  std::vector<double> nu_list;     // strictly decreasing
  std::vector<double> trajectory_nu_list;  // empty: nu_list
  int grid_points = 512;
  int quadrature_points = 4096;
  int cells = 0;                   // Hopf-Lax table, 0: default
  std::vector<double> starts;      // trajectory starts
  double trajectory_T = 3.0;
  double step = 1e-3;
  double tol = -1.0;
};

struct ConvergenceRow {
  double nu = 0.0;
  double sup_difference = 0.0;  // mean-aligned sup over the grid of |psi - phi|
};

struct TrajectoryConvergence {
  double start = 0.0;
  std::vector<double> viscous_endpoints;   // one per nu
  std::vector<double> consecutive_gaps;    // sup over time, nu_i vs nu_{i+1}
  double limit_endpoint = 0.0;
  double endpoint_gap = 0.0;               // limit vs smallest nu
  bool gaps_decreasing = false;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> potential;
  bool potential_decreasing = false;
  std::vector<TrajectoryConvergence> trajectories;
};

/// Mean-aligned potential gaps at time T and viscous vs limit trajectories.
ConvergenceStudy convergence_study(const FourierSeries& phi0, const ConvergenceSettings& settings);
nlohmann::json to_json(const ConvergenceStudy& study);

struct SuiteOptions {
  std::uint64_t seed = 0;
  double step = 0.0;  // > 0 overrides the suite's step
  double tol = 0.0;   // > 0 overrides the suite's tolerance
  std::optional<std::filesystem::path> golden;  // convergence table to compare against
};

/// One named property with its measured value and threshold.
struct SuiteCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  bool pass = false;
  std::vector<SuiteCheck> checks;
  nlohmann::json report;  // deterministic: no timings
  std::string failure;    // names of the violated properties, with counterexamples
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

/// The report as written by the CLI (sorted keys, 17 significant digits).
std::string serialize_report(const SuiteResult& result);

}  // namespace adhesion
