// Runs every property suite twice and prints one PASS/FAIL line per
// acceptance criterion. Exit status is nonzero when any criterion fails.
#include "adhesion/suites.hpp"

#include <fmt/format.h>

#include <chrono>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace adhesion;

namespace {

struct Timed {
  SuiteResult result;
  double seconds = 0.0;
};

Timed timed_run(const std::string& suite, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteOptions opts;
  opts.seed = seed;
  Timed out{run_suite(suite, opts), 0.0};
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

// All checks whose name starts with one of the prefixes must pass, and at
// least one must exist.
bool checks_pass(const SuiteResult& r, const std::vector<std::string>& prefixes, std::string& detail) {
  int seen = 0;
  bool ok = true;
  for (const auto& c : r.checks) {
    for (const auto& p : prefixes) {
      if (!starts_with(c.name, p)) continue;
      ++seen;
      if (!c.pass) {
        ok = false;
        detail += fmt::format(" {}={:.4g}>{:.4g}", c.name, c.value, c.threshold);
      }
      break;
    }
  }
  if (seen == 0) detail += " no matching checks";
  return ok && seen > 0;
}

}  // namespace

int main() {
  const std::map<std::string, std::uint64_t> seeds = {{"convergence", 0}, {"uniqueness", 1}, {"geometry", 42},
                                                      {"hgrad", 7},       {"semiconcavity", 3}, {"a3", 5}};
  std::map<std::string, Timed> first, second;
  for (const auto& [suite, seed] : seeds) first[suite] = timed_run(suite, seed);
  for (const auto& [suite, seed] : seeds) second[suite] = timed_run(suite, seed);

  struct Criterion {
    int id;
    std::string title;
    std::string suite;
    std::vector<std::string> prefixes;
    double time_limit;  // seconds, 0: none
  };
  const std::vector<Criterion> criteria = {
      {1, "viscous potential converges to the limit potential", "convergence",
       {"potential_gap_strictly_decreasing", "potential_gap_at_smallest_nu"}, 30.0},
      {2, "viscous trajectories converge to the limit trajectory", "convergence",
       {"trajectory_gaps_strictly_decreasing", "limit_endpoint_vs_smallest_nu"}, 60.0},
      {3, "limit velocity is the grid argmin of the minimum principle", "hgrad",
       {"node_velocity_is_grid_argmin", "node_velocity_not_above_lattice_minimum", "shock_velocity_is_grid_argmin"},
       60.0},
      {4, "forward uniqueness after merging", "uniqueness",
       {"post_meet_gap", "meet_time", "identical_starts", "off_shock_single_preimage", "shock_preimage_interval"}, 0.0},
      {5, "semiconcavity bound", "semiconcavity", {"second_difference_bound"}, 0.0},
      {6, "Hamiltonian and Lagrangian h-gradients agree", "hgrad",
       {"hamiltonian_equals_lagrangian_form", "hamiltonian_form_not_above_lattice_minimum",
        "homogeneous_flow_is_straight"},
       0.0},
      {7, "flow invariances", "hgrad", {"invariance["}, 0.0},
      {8, "geometry taxonomy", "geometry",
       {"acute_center_is_circumcenter", "obtuse_center_is_longest_side_midpoint", "configuration_class_matches_oracle",
        "totally_obtuse_is_narrow", "narrow_wide_oracles_complementary", "diagram_edges_match_grid_ties"},
       0.0},
      {9, "A3 end point", "a3", {"tangent_check[", "stays_in_halfplane[", "rejects_"}, 0.0},
  };

  bool all = true;
  for (const auto& c : criteria) {
    const Timed& t = first.at(c.suite);
    std::string detail;
    bool ok = checks_pass(t.result, c.prefixes, detail);
    if (c.time_limit > 0.0 && t.seconds >= c.time_limit) {
      ok = false;
      detail += fmt::format(" runtime {:.1f}s>={:.0f}s", t.seconds, c.time_limit);
    }
    all = all && ok;
    fmt::print("{} criterion {:2d}: {} [{} {:.1f}s]{}\n", ok ? "PASS" : "FAIL", c.id, c.title, c.suite, t.seconds,
               detail);
  }

  std::string diff;
  for (const auto& [suite, seed] : seeds)
    if (serialize_report(first.at(suite).result) != serialize_report(second.at(suite).result)) diff += " " + suite;
  all = all && diff.empty();
  fmt::print("{} criterion 10: suite reports are byte identical across runs{}\n", diff.empty() ? "PASS" : "FAIL",
             diff.empty() ? "" : " differing:" + diff);
  return all ? 0 : 1;
}
