#pragma once

#include "adhesion/a3_endpoint.hpp"
#include "adhesion/fourier_series.hpp"
#include "adhesion/limit_potential.hpp"
#include "adhesion/potential_model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace adhesion {

enum class ScenarioKind { HopfLax1D, LocalModel, FiniteMinFamily, A3, ConvergenceStudy };
const char* to_string(ScenarioKind k);

struct TimeSpec {
  double t0 = 0.0;
  double T = 1.0;
  double step = 1e-3;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::HopfLax1D;
  std::string name;

  // HopfLax1D, ConvergenceStudy
  double period = 0.0;
  std::vector<FourierMode> modes;
  int cells = 0;
  int quadrature_points = 4096;
  int grid_points = 512;
  std::vector<double> nu_list;

  // LocalModel
  std::vector<Vec> momenta;
  // FiniteMinFamily
  std::vector<HJBranch> branches;
  // A3
  std::optional<A3EndpointModel> a3;
  // LocalModel, FiniteMinFamily, A3
  double force = 0.0;

  TimeSpec time;
  std::vector<Vec> particles;
  std::vector<std::string> outputs{"csv", "report"};
  std::vector<double> svg_times;
  double tolerance = -1.0;  // < 0: model default
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

/// Validating loader; throws ConfigError carrying the JSON pointer of the
/// offending field.
ScenarioConfig parse_config(const nlohmann::json& doc);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json serialize_config(const ScenarioConfig& config);

/// The potential model described by the config (ConfigError at /potential
/// when the model itself is invalid).
PotentialModel build_model(const ScenarioConfig& config);
FourierSeries build_series(const ScenarioConfig& config);

}  // namespace adhesion
