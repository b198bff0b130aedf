#include "adhesion/runner.hpp"

#include "adhesion/a3_endpoint.hpp"
#include "adhesion/cluster_events.hpp"
#include "adhesion/errors.hpp"
#include "adhesion/shock_geometry.hpp"
#include "adhesion/suites.hpp"
#include "adhesion/svg.hpp"
#include "adhesion/trajectory.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace adhesion {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

namespace {

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

class Output {
 public:
  explicit Output(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    files_[name] = content;
  }

  json manifest() const {
    json files = json::array();
    for (const auto& [name, content] : files_)
      files.push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
    return {{"files", files}};
  }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> files_;
};

struct Invariants {
  json rows = json::array();
  std::string failed;
  void add(const std::string& name, bool pass, double value, double threshold) {
    rows.push_back({{"name", name}, {"pass", pass}, {"value", value}, {"threshold", threshold}});
    if (!pass) failed += fmt::format("invariant violated: {} (value {:.17g}, threshold {:.17g})\n", name, value, threshold);
  }
};

std::string trajectories_csv(const std::vector<LimitTrajectory>& runs, int d) {
  std::string out = "# adhesion trajectories v1\n";
  out += "t,particle_id";
  for (int i = 0; i < d; ++i) out += fmt::format(",x{}", i);
  for (int i = 0; i < d; ++i) out += fmt::format(",v{}", i);
  out += ",on_shock\n";
  std::size_t samples = 0;
  for (const auto& r : runs) samples = std::max(samples, r.size());
  for (std::size_t k = 0; k < samples; ++k)
    for (std::size_t p = 0; p < runs.size(); ++p) {
      const auto& r = runs[p];
      if (k >= r.size()) continue;
      out += fmt::format("{:.17g},{}", r.times[k], p);
      for (int i = 0; i < d; ++i) out += fmt::format(",{:.17g}", r.positions[k][i]);
      for (int i = 0; i < d; ++i) out += fmt::format(",{:.17g}", r.velocities[k][i]);
      out += fmt::format(",{}\n", r.active_counts[k] >= 2 ? 1 : 0);
    }
  return out;
}

// Once two particles share a position they must stay within 2 step B.
void check_coalescence(const std::vector<LimitTrajectory>& runs, double step, Invariants& inv) {
  double speed = 0.0;
  for (const auto& r : runs)
    for (const auto& v : r.velocities) speed = std::max(speed, v.norm());
  const double bound = 2.0 * step * std::max(speed, 1e-12);
  double worst = 0.0;
  for (std::size_t a = 0; a < runs.size(); ++a)
    for (std::size_t b = a + 1; b < runs.size(); ++b) {
      const std::size_t n = std::min(runs[a].size(), runs[b].size());
      bool met = false;
      for (std::size_t k = 0; k < n; ++k) {
        const double gap = (runs[a].positions[k] - runs[b].positions[k]).norm();
        if (!met && gap <= 1e-9) met = true;
        if (met) worst = std::max(worst, gap);
      }
    }
  inv.add("forward_uniqueness", worst <= bound, worst, bound);
}

json particle_summary(const std::vector<LimitTrajectory>& runs) {
  json rows = json::array();
  for (std::size_t p = 0; p < runs.size(); ++p) {
    const auto& r = runs[p];
    json arrival = nullptr;
    int max_active = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      max_active = std::max(max_active, r.active_counts[k]);
      if (arrival.is_null() && r.active_counts[k] >= 2) arrival = r.times[k];
    }
    rows.push_back({{"id", p},
                    {"start", vec_json(r.positions.front())},
                    {"end", vec_json(r.positions.back())},
                    {"end_velocity", vec_json(r.velocities.back())},
                    {"merged", static_cast<bool>(r.merge_flags.back())},
                    {"shock_arrival", arrival},
                    {"max_active", max_active}});
  }
  return rows;
}

ClusterState particle_state(const LimitTrajectory& r, std::size_t k) {
  if (r.support_counts[k] >= 3) return ClusterState::Growing;
  if (r.active_counts[k] >= 2) return ClusterState::Stable;
  return ClusterState::None;
}

json local_model_section(const LocalLinearModel& model) {
  const auto& p = model.momenta().elements();
  json out = {{"momenta", json::array()}};
  for (const auto& m : p) out["momenta"].push_back(vec_json(m));
  const Ball ball = min_enclosing_ball(model.momenta());
  out["node_particle_velocity"] = vec_json(ball.center);
  if (model.dimension() != 2) return out;
  if (p.size() == 3) {
    const NodeInfo info = classify_node(p[0], p[1], p[2]);
    out["node"] = {{"class", to_string(info.cls)},
                   {"node_velocity", vec_json(info.node_velocity)},
                   {"particle_velocity", vec_json(info.particle_velocity)},
                   {"min_cos", info.min_cos}};
  } else if (p.size() == 4) {
    const ConfigurationInfo info = classify_configuration(model.momenta());
    out["configuration"] = {{"class", to_string(info.cls)},
                            {"transition", to_string(info.transition)},
                            {"post_transition_cluster", to_string(info.post_transition_cluster)},
                            {"support_size", info.support_size},
                            {"hull_size", info.hull_size}};
    if (auto ev = transition_event(model))
      out["transition_event"] = {{"kind", to_string(ev->kind)}, {"time", ev->time}, {"location", vec_json(ev->location)}};
  }
  return out;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                       const RunOverrides& overrides) {
  const PotentialModel model = build_model(config);
  const double step = overrides.step > 0.0 ? overrides.step : config.time.step;
  const double tol = overrides.tol > 0.0 ? overrides.tol : config.tolerance;
  const int d = dimension(model);
  auto wants = [&](const char* what) {
    return std::find(config.outputs.begin(), config.outputs.end(), what) != config.outputs.end();
  };
  if (wants("svg") && config.kind != ScenarioKind::LocalModel)
    throw ConfigError("/outputs", "svg output needs a LocalModel scenario");
  if (wants("svg") && d != 2) throw ConfigError("/outputs", "svg output needs planar momenta");

  Output out(out_dir);
  Invariants inv;
  json report = {{"kind", to_string(config.kind)}, {"name", config.name}, {"config", serialize_config(config)},
                 {"step", step}};

  std::vector<LimitTrajectory> runs;
  for (const auto& x0 : config.particles)
    runs.push_back(integrate(model, x0, config.time.t0, config.time.T, step, tol));
  double worst = 0.0;
  for (const auto& r : runs)
    for (const auto& x : r.positions) worst = std::max(worst, x.allFinite() ? 0.0 : 1.0);
  inv.add("finite_positions", worst == 0.0, worst, 0.0);
  check_coalescence(runs, step, inv);
  report["particles"] = particle_summary(runs);

  switch (config.kind) {
    case ScenarioKind::ConvergenceStudy: {
      ConvergenceSettings s;
      s.T = config.time.T;
      s.nu_list = config.nu_list;
      s.grid_points = config.grid_points;
      s.quadrature_points = config.quadrature_points;
      s.cells = config.cells;
      for (const auto& x : config.particles) s.starts.push_back(x[0]);
      s.trajectory_T = config.time.T;
      s.step = step;
      s.tol = tol;
      const ConvergenceStudy study = convergence_study(build_series(config), s);
      report["convergence"] = to_json(study);
      double ratio = 0.0;
      for (std::size_t i = 1; i < study.potential.size(); ++i)
        ratio = std::max(ratio, study.potential[i].sup_difference / study.potential[i - 1].sup_difference);
      inv.add("potential_gap_strictly_decreasing", study.potential_decreasing, ratio, 1.0);
      break;
    }
    case ScenarioKind::LocalModel:
      report["local_model"] = local_model_section(std::get<LocalLinearModel>(model));
      break;
    case ScenarioKind::A3: {
      const auto tangent = a3_tangent_check(std::get<A3EndpointModel>(model));
      report["a3"] = {{"ok", tangent.ok},
                      {"alpha", tangent.alpha_value},
                      {"gamma_max", tangent.gamma_max},
                      {"beta", tangent.beta_value},
                      {"determinant", tangent.determinant},
                      {"diagnostic", tangent.diagnostic}};
      inv.add("a3_tangent_check", tangent.ok, std::abs(tangent.alpha_value), 1e-8);
      break;
    }
    case ScenarioKind::HopfLax1D:
    case ScenarioKind::FiniteMinFamily:
      break;
  }
  report["invariants"] = inv.rows;

  if (wants("csv")) out.write("trajectories.csv", trajectories_csv(runs, d));
  if (wants("svg")) {
    const auto& local = std::get<LocalLinearModel>(model);
    for (double tau : config.svg_times) {
      SvgScene scene{shock_diagram(local, tau), {}, true};
      for (const auto& r : runs) {
        for (std::size_t k = 0; k < r.size(); ++k)
          if (std::abs(r.times[k] - tau) <= 0.5 * step) {
            scene.particles.push_back({r.positions[k], r.velocities[k], particle_state(r, k)});
            break;
          }
      }
      out.write(fmt::format("shock_{:g}.svg", tau), render_svg(scene));
    }
  }
  if (wants("report")) out.write("report.json", report.dump(2) + "\n");

  RunResult result;
  result.manifest = out.manifest();
  std::ofstream(out_dir / "manifest.json", std::ios::binary) << result.manifest.dump(2) << "\n";
  result.exit_code = inv.failed.empty() ? 0 : 1;
  result.message = inv.failed;
  return result;
}

}  // namespace adhesion
