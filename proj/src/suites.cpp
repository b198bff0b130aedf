#include "adhesion/suites.hpp"

#include "adhesion/a3_endpoint.hpp"
#include "adhesion/errors.hpp"
#include "adhesion/hgrad.hpp"
#include "adhesion/limit_potential.hpp"
#include "adhesion/potential_model.hpp"
#include "adhesion/shock_geometry.hpp"
#include "adhesion/trajectory.hpp"
#include "adhesion/viscous_oracle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adhesion {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  Vec point(int d, double lo, double hi) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 gen_;
};

struct Collector {
  std::vector<SuiteCheck> checks;
  void add(std::string name, bool pass, double value, double threshold, std::string detail = {}) {
    checks.push_back({std::move(name), pass, value, threshold, std::move(detail)});
  }
};

SuiteResult finish(const std::string& suite, Collector&& c, json details) {
  SuiteResult r;
  r.suite = suite;
  r.checks = std::move(c.checks);
  r.pass = true;
  json checks = json::array();
  for (const auto& ch : r.checks) {
    checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"value", ch.value}, {"threshold", ch.threshold},
                      {"detail", ch.detail}});
    if (!ch.pass) {
      r.pass = false;
      r.failure += fmt::format("{}: value {:.17g} vs threshold {:.17g}{}{}\n", ch.name, ch.value, ch.threshold,
                               ch.detail.empty() ? "" : "; ", ch.detail);
    }
  }
  r.report = {{"suite", suite}, {"pass", r.pass}, {"checks", checks}, {"details", std::move(details)}};
  return r;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

// Lattice argmin of a convex function on R^d, coarse to fine. Each level
// walks its window until the best point is interior, so the last level
// returns the argmin over the whole lattice of the requested spacing.
Vec lattice_argmin(const std::function<double(const Vec&)>& f, Vec center, double radius, double spacing) {
  const int d = static_cast<int>(center.size());
  double h = radius / 16.0;
  while (true) {
    const bool last = h <= spacing;
    if (last) h = spacing;
    const int n = last ? 40 : 16;
    for (int walk = 0; walk < 200; ++walk) {
      Vec best = center;
      double best_value = f(center);
      std::vector<int> idx(static_cast<std::size_t>(d), -n), best_idx(static_cast<std::size_t>(d), 0);
      while (true) {
        Vec q = center;
        for (int i = 0; i < d; ++i) q[i] += h * idx[static_cast<std::size_t>(i)];
        const double v = f(q);
        if (v < best_value) {
          best_value = v;
          best = q;
          best_idx = idx;
        }
        int pos = 0;
        while (pos < d && idx[static_cast<std::size_t>(pos)] == n) idx[static_cast<std::size_t>(pos++)] = -n;
        if (pos == d) break;
        ++idx[static_cast<std::size_t>(pos)];
      }
      center = best;
      if (std::none_of(best_idx.begin(), best_idx.end(), [&](int k) { return std::abs(k) >= n - 1; })) break;
    }
    if (last) return center;
    h = std::max(h / 4.0, spacing);
  }
}

FourierSeries random_series(Rng& rng, bool even) {
  std::vector<FourierMode> modes;
  modes.push_back({{1}, 1.0, even ? 0.0 : rng.uniform(-0.3, 0.3)});
  for (int k = 2; k <= 3; ++k)
    modes.push_back({{k}, rng.uniform(-0.08, 0.08), even ? 0.0 : rng.uniform(-0.08, 0.08)});
  return FourierSeries(Vec::Constant(1, 2.0 * kPi), modes);
}

//------------------------------------------------------------------------
// convergence

ConvergenceSettings benchmark_settings(const SuiteOptions& o) {
  ConvergenceSettings s;
  s.T = 2.0;
  s.nu_list = {0.1, 0.05, 0.02, 0.01};
  s.trajectory_nu_list = {0.1, 0.05, 0.02, 0.01, 0.005};
  s.starts = {kPi / 2.0, kPi / 4.0, 3.0 * kPi / 2.0};
  s.trajectory_T = 3.0;
  s.step = o.step > 0.0 ? o.step : 1e-3;
  s.tol = o.tol > 0.0 ? o.tol : -1.0;
  return s;
}

double max_number_gap(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return std::abs(a.get<double>() - b.get<double>());
  if (a.type() != b.type()) return std::numeric_limits<double>::infinity();
  double gap = 0.0;
  if (a.is_array()) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, max_number_gap(a[i], b[i]));
  } else if (a.is_object()) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return std::numeric_limits<double>::infinity();
      gap = std::max(gap, max_number_gap(it.value(), b.at(it.key())));
    }
  } else if (a != b) {
    return std::numeric_limits<double>::infinity();
  }
  return gap;
}

SuiteResult convergence_suite(const SuiteOptions& o) {
  const ConvergenceSettings s = benchmark_settings(o);
  const ConvergenceStudy study = convergence_study(FourierSeries::cosine(1), s);
  Collector c;
  double worst_ratio = 0.0;
  for (std::size_t i = 1; i < study.potential.size(); ++i)
    worst_ratio = std::max(worst_ratio, study.potential[i].sup_difference / study.potential[i - 1].sup_difference);
  c.add("potential_gap_strictly_decreasing", study.potential_decreasing, worst_ratio, 1.0,
        "largest ratio of consecutive sup differences");
  c.add("potential_gap_at_smallest_nu", study.potential.back().sup_difference <= 0.05,
        study.potential.back().sup_difference, 0.05);
  for (std::size_t i = 0; i < study.trajectories.size(); ++i) {
    const auto& tr = study.trajectories[i];
    double ratio = 0.0;
    for (std::size_t j = 1; j < tr.consecutive_gaps.size(); ++j)
      ratio = std::max(ratio, tr.consecutive_gaps[j] / tr.consecutive_gaps[j - 1]);
    c.add(fmt::format("trajectory_gaps_strictly_decreasing[start={:.6f}]", tr.start), tr.gaps_decreasing, ratio,
          1.0, "largest ratio of consecutive sup distances");
    c.add(fmt::format("limit_endpoint_vs_smallest_nu[start={:.6f}]", tr.start), tr.endpoint_gap <= 2e-2,
          tr.endpoint_gap, 2e-2);
  }
  json details = to_json(study);
  if (o.golden) {
    std::ifstream in(*o.golden);
    if (!in) {
      c.add("golden_table", false, std::numeric_limits<double>::infinity(), 1e-10,
            "cannot open " + o.golden->string());
    } else {
      const json golden = json::parse(in);
      const double gap = max_number_gap(golden, details);
      c.add("golden_table", gap <= 1e-10, gap, 1e-10, o.golden->filename().string());
    }
  }
  return finish("convergence", std::move(c), std::move(details));
}

//------------------------------------------------------------------------
// uniqueness

json uniqueness_json(const UniquenessReport& r) {
  return {{"met", r.met},     {"meet_time", r.meet_time}, {"post_meet_gap", r.post_meet_gap},
          {"velocity_bound", r.velocity_bound}, {"bound", r.bound}, {"pass", r.pass}};
}

SuiteResult uniqueness_suite(const SuiteOptions& o) {
  Collector c;
  json details = json::object();
  const double base = o.step > 0.0 ? o.step : 1e-3;
  const std::vector<double> steps{base, base / 2.0};
  const double tol = o.tol > 0.0 ? o.tol : -1.0;

  struct Pair {
    std::string name;
    PotentialModel model;
    double a, b, T;
  };
  std::vector<Pair> pairs;
  pairs.push_back({"cos", HopfLaxPotential(FourierSeries::cosine(1)), -0.5, 0.5, 3.0});
  Rng rng(o.seed);
  for (int i = 0; i < 4; ++i) {
    const double a = rng.uniform(0.3, 1.2);
    pairs.push_back({fmt::format("even{}", i), HopfLaxPotential(random_series(rng, true)), -a, a, 3.0});
  }
  pairs.push_back({"moving_shock",
                   FiniteMinFamily({HJBranch{0.0, make_vec({1.0}), 0.0, Vec()},
                                    HJBranch{0.0, make_vec({-0.5}), 0.0, Vec()}}),
                   -1.0, 2.0, 3.0});

  json pair_json = json::array();
  for (const auto& p : pairs) {
    json runs = json::array();
    std::vector<double> gaps;
    for (double h : steps) {
      const auto r = forward_uniqueness_check(p.model, make_vec({p.a}), make_vec({p.b}), 0.0, p.T, h, 0.0, 0.0, tol);
      json run = uniqueness_json(r);
      run["step"] = h;
      runs.push_back(run);
      c.add(fmt::format("post_meet_gap[{},step={:g}]", p.name, h), r.met && r.pass, r.post_meet_gap, r.bound,
            r.met ? "" : "trajectories never met");
      gaps.push_back(r.post_meet_gap);
      if (p.name == "moving_shock") {
        // the gap closes at speed 3/4 once the left particle rides the shock
        const double err = std::abs(r.meet_time - 8.0 / 3.0);
        const double allowed = h * r.velocity_bound / 0.75 + h;
        c.add(fmt::format("meet_time[{},step={:g}]", p.name, h), err <= allowed, err, allowed);
      }
    }
    json entry = {{"name", p.name}, {"start_a", p.a}, {"start_b", p.b}, {"runs", runs}};
    if (gaps[1] > 0.0) entry["gap_ratio"] = gaps[0] / gaps[1];
    pair_json.push_back(entry);
  }
  details["pairs"] = pair_json;

  {
    HopfLaxPotential cosine(FourierSeries::cosine(1));
    const auto r = forward_uniqueness_check(cosine, make_vec({0.7}), make_vec({0.7}), 0.0, 2.0, base, 0.0, 0.0, tol);
    c.add("identical_starts", r.met && r.post_meet_gap == 0.0, r.post_meet_gap, 0.0);
    details["identical_starts"] = uniqueness_json(r);
  }

  {
    // Characteristics of the cosine benchmark: x = a - t sin a.
    HopfLaxPotential cosine(FourierSeries::cosine(1));
    const double t_star = 1.5;
    const double reach_step = 2e-3;
    const int samples = 64;
    const double radius = kPi;
    auto characteristic_root = [&](double x, double guess) {
      double a = guess;
      for (int i = 0; i < 60; ++i) a -= (a - t_star * std::sin(a) - x) / (1.0 - t_star * std::cos(a));
      return a;
    };
    const double x_off = 2.0;
    const double a_off = characteristic_root(x_off, 2.5);
    const auto off = backward_reachability(cosine, make_vec({x_off}), t_star, samples, 0.0, reach_step,
                                           radius, tol);
    double err = std::numeric_limits<double>::infinity();
    if (off.preimages.size() == 1) err = std::abs(off.preimages[0][0] - a_off);
    c.add("off_shock_single_preimage", off.preimages.size() == 1 && err <= 1e-4, err, 1e-4,
          fmt::format("{} preimages", off.preimages.size()));

    const double a_edge = characteristic_root(0.0, 1.5);
    const auto on = backward_reachability(cosine, make_vec({0.0}), t_star, samples, 0.0, reach_step, radius, tol);
    const double spacing = 2.0 * radius / (samples - 1);
    double interval_err = std::numeric_limits<double>::infinity();
    if (on.preimages.size() == 2) {
      const double lo = std::min(on.preimages[0][0], on.preimages[1][0]);
      const double hi = std::max(on.preimages[0][0], on.preimages[1][0]);
      interval_err = std::max(std::abs(lo + a_edge), std::abs(hi - a_edge));
    }
    c.add("shock_preimage_interval", on.preimages.size() == 2 && interval_err <= spacing, interval_err, spacing,
          fmt::format("{} preimages", on.preimages.size()));
    json pre_off = json::array(), pre_on = json::array();
    for (const auto& x : off.preimages) pre_off.push_back(x[0]);
    for (const auto& x : on.preimages) pre_on.push_back(x[0]);
    details["reachability"] = {{"off_shock", {{"target", x_off}, {"preimages", pre_off}, {"expected", a_off}}},
                               {"on_shock", {{"target", 0.0}, {"preimages", pre_on}, {"expected", a_edge}}},
                               {"t_star", t_star}};
  }
  return finish("uniqueness", std::move(c), std::move(details));
}

//------------------------------------------------------------------------
// geometry

Vec circumcenter_oracle(const Vec& a, const Vec& b, const Vec& c) {
  // |x - a|^2 = |x - b|^2 = |x - c|^2 as a 2x2 linear system
  Eigen::Matrix2d m;
  m << 2.0 * (b - a).transpose(), 2.0 * (c - a).transpose();
  Eigen::Vector2d r(b.squaredNorm() - a.squaredNorm(), c.squaredNorm() - a.squaredNorm());
  return m.partialPivLu().solve(r);
}

bool obtuse_oracle(const Vec& a, const Vec& b, const Vec& c) {
  return (b - a).dot(c - a) < 0.0 || (a - b).dot(c - b) < 0.0 || (a - c).dot(b - c) < 0.0;
}

double segment_distance(const Vec& x, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double len2 = d.squaredNorm();
  const double s = len2 > 0.0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (x - a - s * d).norm();
}

// Portion of the edge inside the box [lo, hi]^2, as a segment.
std::optional<std::pair<Vec, Vec>> clip(const ShockEdge& e, double lo, double hi) {
  double s0 = e.s_min, s1 = e.s_max;
  for (int i = 0; i < 2; ++i) {
    if (std::abs(e.direction[i]) < 1e-15) {
      if (e.origin[i] < lo || e.origin[i] > hi) return std::nullopt;
      continue;
    }
    double a = (lo - e.origin[i]) / e.direction[i];
    double b = (hi - e.origin[i]) / e.direction[i];
    if (a > b) std::swap(a, b);
    s0 = std::max(s0, a);
    s1 = std::min(s1, b);
  }
  if (!(s0 < s1)) return std::nullopt;
  return std::make_pair(e.point(s0), e.point(s1));
}

struct DiagramCheck {
  double hausdorff = 0.0;
  double cell = 0.0;
};

DiagramCheck diagram_vs_grid(const LocalLinearModel& model, double tau, int n) {
  const auto& p = model.momenta().elements();
  double extent = 0.5;
  for (const auto& m : p) extent = std::max(extent, 1.5 * std::abs(tau) * m.norm());
  const double lo = -extent, hi = extent;
  const double h = (hi - lo) / n;
  auto owner = [&](double x, double y) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double v = p[i][0] * x + p[i][1] * y - 0.5 * tau * p[i].squaredNorm();
      if (v < best_value) {
        best_value = v;
        best = i;
      }
    }
    return best;
  };
  std::vector<std::size_t> own(static_cast<std::size_t>(n * n));
  auto centre = [&](int i) { return lo + (i + 0.5) * h; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) own[static_cast<std::size_t>(i * n + j)] = owner(centre(i), centre(j));
  std::vector<Vec> ties;
  std::vector<char> mark(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto o = own[static_cast<std::size_t>(i * n + j)];
      if (i + 1 < n && own[static_cast<std::size_t>((i + 1) * n + j)] != o) {
        ties.push_back(make_vec({centre(i) + 0.5 * h, centre(j)}));
        mark[static_cast<std::size_t>(i * n + j)] = 1;
      }
      if (j + 1 < n && own[static_cast<std::size_t>(i * n + j + 1)] != o) {
        ties.push_back(make_vec({centre(i), centre(j) + 0.5 * h}));
        mark[static_cast<std::size_t>(i * n + j)] = 1;
      }
    }

  const ShockComplex complex = shock_diagram(model, tau);
  std::vector<std::pair<Vec, Vec>> segments;
  for (const auto& e : complex.edges)
    if (auto s = clip(e, lo, hi)) segments.push_back(*s);

  double worst = 0.0;
  for (const auto& t : ties) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : segments) best = std::min(best, segment_distance(t, a, b));
    worst = std::max(worst, best);
  }
  // Edge samples against tie points, skipping a margin at the box boundary.
  const double margin = 3.0 * h;
  for (const auto& [a, b] : segments) {
    const double len = (b - a).norm();
    const int m = std::max(1, static_cast<int>(std::ceil(2.0 * len / h)));
    for (int k = 0; k <= m; ++k) {
      const Vec x = a + (b - a) * (static_cast<double>(k) / m);
      if (x[0] < lo + margin || x[0] > hi - margin || x[1] < lo + margin || x[1] > hi - margin) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& t : ties)
        if (std::abs(t[0] - x[0]) <= 4.0 * h && std::abs(t[1] - x[1]) <= 4.0 * h)
          best = std::min(best, (t - x).norm());
      worst = std::max(worst, best);
    }
  }
  return {worst, h};
}

SuiteResult geometry_suite(const SuiteOptions& o) {
  Rng rng(o.seed);
  Collector c;
  json details = json::object();

  int acute = 0, obtuse = 0, rejected = 0;
  double acute_err = 0.0, obtuse_err = 0.0;
  json triangle_dump;
  while (acute + obtuse < 10000) {
    const Vec a = rng.point(2, -1, 1), b = rng.point(2, -1, 1), d = rng.point(2, -1, 1);
    const double cross = (b - a)[0] * (d - a)[1] - (b - a)[1] * (d - a)[0];
    if (std::abs(cross) < 1e-3 || std::abs(min_angle_cosine(a, b, d)) < 1e-6) {
      ++rejected;
      continue;
    }
    const Ball ball = min_enclosing_ball(MomentumSet{a, b, d});
    if (obtuse_oracle(a, b, d)) {
      ++obtuse;
      const double ab = (a - b).norm(), bd = (b - d).norm(), da = (d - a).norm();
      Vec mid = ab >= bd && ab >= da ? Vec(0.5 * (a + b)) : (bd >= da ? Vec(0.5 * (b + d)) : Vec(0.5 * (d + a)));
      const double err = (ball.center - mid).norm();
      if (err > obtuse_err) {
        obtuse_err = err;
        if (err > 1e-10) triangle_dump = {vec_json(a), vec_json(b), vec_json(d)};
      }
    } else {
      ++acute;
      const double err = (ball.center - circumcenter_oracle(a, b, d)).norm();
      if (err > acute_err) {
        acute_err = err;
        if (err > 1e-10) triangle_dump = {vec_json(a), vec_json(b), vec_json(d)};
      }
    }
  }
  c.add("acute_center_is_circumcenter", acute_err <= 1e-10, acute_err, 1e-10);
  c.add("obtuse_center_is_longest_side_midpoint", obtuse_err <= 1e-10, obtuse_err, 1e-10);
  details["triangles"] = {{"acute", acute}, {"obtuse", obtuse}, {"rejected", rejected}};
  if (!triangle_dump.is_null()) details["triangle_counterexample"] = triangle_dump;

  int counts[3] = {0, 0, 0};
  int mismatches = 0, not_narrow = 0, non_generic = 0, inconsistent_oracles = 0;
  json config_dump;
  int classified = 0;
  while (classified < 10000) {
    std::vector<Vec> pts;
    for (int i = 0; i < 4; ++i) pts.push_back(rng.point(2, -1, 1));
    ConfigurationInfo info;
    try {
      info = classify_configuration(MomentumSet(pts));
    } catch (const GenericityViolation&) {
      ++non_generic;
      continue;
    } catch (const std::logic_error&) {
      ++not_narrow;
      ++classified;
      if (config_dump.is_null())
        for (const auto& p : pts) config_dump.push_back(vec_json(p));
      continue;
    }
    ++classified;
    ++counts[static_cast<int>(info.cls)];
    bool all_obtuse = true, pair_disk = false, acute_circle = false;
    for (int drop = 0; drop < 4; ++drop) {
      std::vector<Vec> t;
      for (int i = 0; i < 4; ++i)
        if (i != drop) t.push_back(pts[static_cast<std::size_t>(i)]);
      const bool ob = obtuse_oracle(t[0], t[1], t[2]);
      all_obtuse = all_obtuse && ob;
      if (!ob) {
        const Vec cc = circumcenter_oracle(t[0], t[1], t[2]);
        const double r = (t[0] - cc).norm();
        if ((pts[static_cast<std::size_t>(drop)] - cc).norm() < r) acute_circle = true;
      }
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        const Vec m = 0.5 * (pts[static_cast<std::size_t>(i)] + pts[static_cast<std::size_t>(j)]);
        const double r = 0.5 * (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).norm();
        bool inside = true;
        for (int k = 0; k < 4; ++k)
          if (k != i && k != j && (pts[static_cast<std::size_t>(k)] - m).norm() > r) inside = false;
        pair_disk = pair_disk || inside;
      }
    if (pair_disk == acute_circle) ++inconsistent_oracles;
    if (all_obtuse && !pair_disk) ++not_narrow;
    const ConfigClass expected =
        all_obtuse ? ConfigClass::TotallyObtuse : (pair_disk ? ConfigClass::Narrow : ConfigClass::Wide);
    if (expected != info.cls) {
      ++mismatches;
      if (config_dump.is_null())
        for (const auto& p : pts) config_dump.push_back(vec_json(p));
    }
  }
  c.add("configuration_class_matches_oracle", mismatches == 0, mismatches, 0.0);
  c.add("totally_obtuse_is_narrow", not_narrow == 0, not_narrow, 0.0);
  c.add("narrow_wide_oracles_complementary", inconsistent_oracles == 0, inconsistent_oracles, 0.0);
  details["configurations"] = {{"totally_obtuse", counts[0]}, {"narrow", counts[1]},   {"wide", counts[2]},
                               {"non_generic", non_generic},  {"mismatches", mismatches}};
  if (!config_dump.is_null()) details["configuration_counterexample"] = config_dump;

  int models = 0;
  double worst_cells = 0.0;
  json diagram_rows = json::array();
  while (models < 50) {
    const int k = rng.integer(3, 5);
    std::vector<Vec> pts;
    for (int i = 0; i < k; ++i) pts.push_back(rng.point(2, -1, 1));
    const double tau = (rng.uniform(0, 1) < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 1.5);
    std::optional<LocalLinearModel> model;
    try {
      model.emplace(MomentumSet(pts));
    } catch (const Error&) {
      continue;
    }
    const DiagramCheck dc = diagram_vs_grid(*model, tau, 240);
    const double cells = dc.hausdorff / dc.cell;
    if (cells > worst_cells) worst_cells = cells;
    json m = json::array();
    for (const auto& p : pts) m.push_back(vec_json(p));
    diagram_rows.push_back({{"momenta", m}, {"tau", tau}, {"hausdorff_cells", cells}});
    ++models;
  }
  c.add("diagram_edges_match_grid_ties", worst_cells <= 2.0, worst_cells, 2.0, "Hausdorff distance in cells");
  details["diagrams"] = diagram_rows;
  return finish("geometry", std::move(c), std::move(details));
}

//------------------------------------------------------------------------
// hgrad

Mat random_spd(Rng& rng, int m, double lo, double hi) {
  Mat q = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) q(i, j) = rng.uniform(-1, 1);
  Eigen::HouseholderQR<Mat> qr(q);
  const Mat basis = qr.householderQ();
  Vec eig(m);
  for (int i = 0; i < m; ++i) eig[i] = rng.uniform(lo, hi);
  return basis * eig.asDiagonal() * basis.transpose();
}

Hamiltonian random_hamiltonian(Rng& rng, int m) {
  if (rng.uniform(0, 1) < 0.5) return Hamiltonian::burgers(m - 1);
  return Hamiltonian(rng.point(m, -0.5, 0.5), random_spd(rng, m, 0.5, 2.0));
}

SemiconcavePotential random_pieces(Rng& rng, int m, const Vec& X, bool quadratic) {
  const int k = rng.integer(2, 4);
  std::vector<QuadraticPiece> pieces;
  for (int i = 0; i < k; ++i) {
    QuadraticPiece pc;
    pc.linear = rng.point(m, -1, 1);
    if (quadratic) {
      Mat h(m, m);
      for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) h(r, s) = rng.uniform(-0.5, 0.5);
      pc.hessian = 0.5 * (h + h.transpose());
    } else {
      pc.hessian = Mat::Zero(m, m);
    }
    pc.constant = -(pc.linear.dot(X) + 0.5 * X.dot(pc.hessian * X));
    pieces.push_back(pc);
  }
  return min_of_pieces(pieces);
}

SuiteResult hgrad_suite(const SuiteOptions& o) {
  Rng rng(o.seed);
  Collector c;
  json details = json::object();
  const double grid = 1e-3;

  {
    // Node velocities of random three-momentum local models.
    int done = 0;
    double worst = 0.0, worst_two = 0.0, worst_three = 0.0;
    double excess = -std::numeric_limits<double>::infinity();  // f(velocity) - f(lattice argmin)
    json dump;
    while (done < 200) {
      std::vector<Vec> pts;
      for (int i = 0; i < 3; ++i) pts.push_back(rng.point(2, -1, 1));
      std::optional<LocalLinearModel> model;
      try {
        model.emplace(MomentumSet(pts));
      } catch (const Error&) {
        continue;
      }
      const PotentialModel pm = *model;
      const Vec origin = Vec::Zero(2);
      const double eps = 1e-6;
      const double base = evaluate(pm, origin, 0.0);
      auto objective = [&](const Vec& q) { return 0.5 * q.squaredNorm() - (evaluate(pm, eps * q, eps) - base) / eps; };
      const Vec v = limit_velocity(pm, origin, 0.0, o.tol > 0.0 ? o.tol : default_tolerance(pm));
      const Vec g = lattice_argmin(objective, Vec::Zero(2), 2.0, grid);
      excess = std::max(excess, objective(v) - objective(g));
      const double err = (v - g).norm();
      const auto support = ball_support(model->momenta(), min_enclosing_ball(model->momenta())).size();
      auto& slot = support == 3 ? worst_three : worst_two;
      slot = std::max(slot, err);
      if (err > worst) {
        worst = err;
        dump.clear();
        for (const auto& p : pts) dump.push_back(vec_json(p));
      }
      ++done;
    }
    c.add("node_velocity_is_grid_argmin", worst <= grid * std::sqrt(2.0), worst, grid * std::sqrt(2.0));
    c.add("node_velocity_not_above_lattice_minimum", excess <= 1e-12, excess, 1e-12,
          "objective at the velocity minus the lattice minimum");
    details["local_models"] = {{"count", done},
                               {"worst", worst},
                               {"worst_two_point_support", worst_two},
                               {"worst_three_point_support", worst_three},
                               {"worst_model", dump}};
  }

  {
    // Shock points of random Hopf-Lax potentials on the line.
    int done = 0;
    double worst = 0.0;
    json rows = json::array();
    while (done < 100) {
      const HopfLaxPotential hl(random_series(rng, false));
      const PotentialModel pm = hl;
      const double tol = o.tol > 0.0 ? o.tol : default_tolerance(pm);
      const double t = rng.uniform(1.5, 3.0);
      for (double x : find_shocks_1d(hl, t, 0.0, 1024)) {
        if (done >= 100) break;
        const auto act = active_branches(pm, make_vec({x}), t, tol);
        if (act.size() != 2) continue;
        const double jump = std::abs(act[0].momentum[0] - act[1].momentum[0]);
        if (jump < 0.05) continue;
        const double eps = 1e-7;
        const double base = hl.evaluate(make_vec({x}), t);
        auto objective = [&](const Vec& q) {
          return 0.5 * q.squaredNorm() - (hl.evaluate(make_vec({x + eps * q[0]}), t + eps) - base) / eps;
        };
        const Vec v = limit_velocity(pm, make_vec({x}), t, tol);
        const Vec g = lattice_argmin(objective, Vec::Zero(1), 4.0, grid);
        const double err = std::abs(v[0] - g[0]);
        worst = std::max(worst, err);
        rows.push_back({{"x", x}, {"t", t}, {"velocity", v[0]}, {"grid_argmin", g[0]}});
        ++done;
      }
    }
    c.add("shock_velocity_is_grid_argmin", worst <= grid, worst, grid);
    details["hopf_lax_shocks"] = rows;
  }

  {
    // Hamiltonian form against the Lagrangian grid form.
    double worst_cells = 0.0;
    double excess = -std::numeric_limits<double>::infinity();
    json dump;
    for (int n = 0; n < 100; ++n) {
      const int m = rng.integer(2, 3);
      const Vec X = rng.point(m, -1, 1);
      const Hamiltonian ham = random_hamiltonian(rng, m);
      const SemiconcavePotential pot = random_pieces(rng, m, X, true);
      const Vec a = h_gradient(pot, ham, X);
      const Vec b = h_gradient_lagrangian(pot, ham, X, GridSpec{grid, 0.0});
      const MomentumSet D = pot.subdifferential(X);
      auto objective = [&](const Vec& Q) {
        const ExtendedReal l = ham.lagrangian(Q);
        return l.is_finite() ? l.value() - directional_min(D, Q) : std::numeric_limits<double>::infinity();
      };
      excess = std::max(excess, objective(a) - objective(b));
      const double diameter = grid * std::sqrt(static_cast<double>(ham.range_basis().cols()));
      const double cells = (a - b).norm() / diameter;
      if (cells > worst_cells) {
        worst_cells = cells;
        dump = {{"X", vec_json(X)}, {"hamiltonian_form", vec_json(a)}, {"lagrangian_form", vec_json(b)}};
      }
    }
    c.add("hamiltonian_equals_lagrangian_form", worst_cells <= 1.0, worst_cells, 1.0,
          "distance in grid diameters");
    c.add("hamiltonian_form_not_above_lattice_minimum", excess <= 1e-12, excess, 1e-12,
          "l - phi' at the Hamiltonian form minus its lattice minimum");
    details["duality"] = {{"count", 100}, {"worst_diameters", worst_cells}, {"worst", dump}};
  }

  {
    // Concave positively homogeneous potentials: the flow from the origin is
    // the straight line t * g.
    const double step = o.step > 0.0 ? o.step : 1e-3;
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
      const int m = rng.integer(2, 3);
      const Vec origin = Vec::Zero(m);
      const Hamiltonian ham = random_hamiltonian(rng, m);
      const SemiconcavePotential pot = random_pieces(rng, m, origin, false);
      const Vec g = h_gradient(pot, ham, origin);
      for (const auto& s : flow(FlowMap(pot, ham, step), origin, 1.0))
        worst = std::max(worst, (s.X - s.t * g).norm());
    }
    c.add("homogeneous_flow_is_straight", worst <= 10.0 * step, worst, 10.0 * step);
    details["homogeneous"] = {{"count", 20}, {"worst_deviation", worst}};
  }

  {
    const double step = o.step > 0.0 ? o.step : 1e-4;
    const Hamiltonian burgers1 = Hamiltonian::burgers(1);
    const Hamiltonian burgers2 = Hamiltonian::burgers(2);
    struct Case {
      std::string name;
      SemiconcavePotential potential;
      const Hamiltonian* ham;
      Vec X0;
    };
    std::vector<Case> cases;
    cases.push_back({"smooth_quadratic",
                     min_of_pieces({QuadraticPiece{0.1, make_vec({0.3, -0.2}), Mat::Identity(2, 2) * 0.5}}),
                     &burgers1, make_vec({0.2, 0.1})});
    cases.push_back({"two_planes",
                     min_of_pieces({QuadraticPiece{0.0, make_vec({1.0, -0.5}), Mat()},
                                    QuadraticPiece{0.0, make_vec({-0.5, -0.125}), Mat()}}),
                     &burgers1, make_vec({-0.3, 0.0})});
    cases.push_back({"three_planes",
                     min_of_pieces({QuadraticPiece{0.0, make_vec({1.0, 0.0, -0.5}), Mat()},
                                    QuadraticPiece{0.0, make_vec({-0.5, 0.8, -0.445}), Mat()},
                                    QuadraticPiece{0.0, make_vec({-0.4, -0.9, -0.485}), Mat()}}),
                     &burgers2, make_vec({0.1, -0.2, 0.0})});
    Mat h1 = Mat::Zero(2, 2), h2 = Mat::Zero(2, 2);
    h1(0, 0) = -0.6;
    h2(0, 0) = 0.4;
    cases.push_back({"curved_pieces",
                     min_of_pieces({QuadraticPiece{0.0, make_vec({0.8, -0.32}), h1},
                                    QuadraticPiece{0.0, make_vec({-0.6, -0.18}), h2}}),
                     &burgers1, make_vec({-0.25, 0.0})});
    double worst = 0.0;
    json rows = json::array();
    for (const auto& cs : cases) {
      const auto r = invariance_suite(FlowMap(cs.potential, *cs.ham, step), cs.X0, 0.3, 2.0,
                                      Vec::Constant(cs.X0.size(), 0.125), 0.1, 0.75);
      worst = std::max(worst, r.max());
      rows.push_back({{"name", cs.name},
                      {"constant_shift", r.constant_shift},
                      {"translation", r.translation},
                      {"semigroup", r.semigroup},
                      {"dilation", r.dilation}});
      c.add(fmt::format("invariance[{}]", cs.name), r.max() <= 1e-6, r.max(), 1e-6);
    }
    details["invariance"] = {{"step", step}, {"cases", rows}};
  }
  return finish("hgrad", std::move(c), std::move(details));
}

//------------------------------------------------------------------------
// semiconcavity

SuiteResult semiconcavity_suite(const SuiteOptions& o) {
  Collector c;
  json rows = json::array();
  const FourierSeries phi0 = FourierSeries::cosine(1);
  const double T = 2.0, delta = 1e-3, bound = 1.0, tol = 1e-2;
  const int directions = 8, samples = 10000;
  for (double nu : {0.1, 0.05, 0.02, 0.01, 0.005}) {
    const ViscousSolution s(phi0, nu);
    const auto r = second_derivative_bound_check(s, T, directions, delta, samples, o.seed, bound, tol);
    c.add(fmt::format("second_difference_bound[nu={:g}]", nu), !r.violated, r.max_second_difference, bound + tol,
          fmt::format("at x={:.6f} t={:.6f} angle={:.6f}", r.at_x, r.at_t, r.direction));
    rows.push_back({{"nu", nu},
                    {"max_second_difference", r.max_second_difference},
                    {"at_x", r.at_x},
                    {"at_t", r.at_t},
                    {"direction", r.direction},
                    {"initial_spacetime_curvature", initial_spacetime_curvature(phi0, nu)}});
  }
  {
    const HopfLaxPotential hl(phi0);
    auto f = [&](double x, double t) { return hl.evaluate(make_vec({x}), t); };
    const auto r = second_difference_scan(f, 2.0 * kPi, T, directions, delta, samples, o.seed, bound, tol);
    c.add("second_difference_bound[limit]", !r.violated, r.max_second_difference, bound + tol,
          fmt::format("at x={:.6f} t={:.6f} angle={:.6f}", r.at_x, r.at_t, r.direction));
    rows.push_back({{"nu", 0.0},
                    {"max_second_difference", r.max_second_difference},
                    {"at_x", r.at_x},
                    {"at_t", r.at_t},
                    {"direction", r.direction},
                    {"initial_spacetime_curvature", initial_spacetime_curvature(phi0, 0.0)}});
  }
  json details = {{"T", T}, {"delta", delta}, {"samples", samples}, {"directions", directions}, {"rows", rows}};
  return finish("semiconcavity", std::move(c), std::move(details));
}

//------------------------------------------------------------------------
// a3

json tangent_json(const A3TangentReport& r) {
  return {{"ok", r.ok},         {"alpha", r.alpha_value},      {"gamma_max", r.gamma_max},
          {"beta", r.beta_value}, {"determinant", r.determinant}, {"diagnostic", r.diagnostic}};
}

A3EndpointModel example_model() {
  A3EndpointModel m;
  m.A = 1.0;
  m.B = make_vec({0.0});
  m.C = Mat::Identity(1, 1);
  m.alpha = make_vec({1.0, 0.0, 0.0});
  m.beta = make_vec({0.0, 0.0, -1.0});
  m.gamma = Mat(1, 3);
  m.gamma << 0.0, 1.0, 0.0;
  m.p_star = Vec::Zero(2);
  return m;
}

// Half-plane membership along the trajectory from the end point.
struct EndpointRun {
  int outside = 0;
  int samples = 0;
  double max_alpha = 0.0;
  double max_determinant = -std::numeric_limits<double>::infinity();
};

EndpointRun endpoint_run(const A3EndpointModel& model, double step, double tol) {
  const A3Halfplane hp = a3_shock_halfplane(model);
  const LimitTrajectory tr = integrate(model, Vec::Zero(model.dimension()), 0.0, 0.1, step, tol);
  EndpointRun run;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    if (!(tr.times[i] > 0.0)) continue;
    ++run.samples;
    const Vec& q = tr.positions[i];
    run.max_alpha = std::max(run.max_alpha, std::abs(apply_form(hp.alpha, q, tr.times[i])));
    run.max_determinant = std::max(run.max_determinant, hp.determinant(q, tr.times[i]));
    if (!hp.contains(q, tr.times[i])) ++run.outside;
  }
  return run;
}

SuiteResult a3_suite(const SuiteOptions& o) {
  Rng rng(o.seed);
  Collector c;
  json details = json::object();
  const double step = o.step > 0.0 ? o.step : 1e-3;
  const double tol = o.tol > 0.0 ? o.tol : -1.0;

  auto examine = [&](const std::string& name, const A3EndpointModel& m) {
    const auto tangent = a3_tangent_check(m);
    c.add(fmt::format("tangent_check[{}]", name), tangent.ok, tangent.alpha_value, 1e-8, tangent.diagnostic);
    const EndpointRun run = endpoint_run(m, step, tol);
    c.add(fmt::format("stays_in_halfplane[{}]", name), run.outside == 0 && run.samples > 0, run.outside, 0.0,
          fmt::format("{} samples, max |alpha| {:.3g}", run.samples, run.max_alpha));
    return json{{"name", name},
                {"tangent", tangent_json(tangent)},
                {"samples", run.samples},
                {"outside", run.outside},
                {"max_alpha", run.max_alpha},
                {"max_determinant", run.max_determinant}};
  };

  json rows = json::array();
  rows.push_back(examine("example", example_model()));

  int made = 0;
  while (made < 20) {
    const Vec v = rng.point(2, -1, 1), w = rng.point(2, -1, 1), z = rng.point(2, -1, 1);
    if (std::abs(v[0] * z[1] - v[1] * z[0]) < 0.3 || v.norm() < 0.5) continue;
    const double A = rng.uniform(0.5, 2.0), C = rng.uniform(0.5, 2.0);
    const double B = rng.uniform(-0.5, 0.5) * std::sqrt(A * C);
    const Vec p_star = rng.point(2, -0.5, 0.5);
    const Vec x_star = rng.point(2, -1, 1);
    const double t_star = rng.uniform(0.5, 2.0);
    GeneratingFamily F = [=](const Vec& xi, const Vec& x, double t) {
      const double a = xi[0], b = xi[1];
      const Vec p = p_star + a * v + a * a * w + b * z;
      const double cpart = A * a * a * a * a + 2.0 * B * a * a * b + C * b * b;
      return cpart + p.dot(x - x_star) - (t - t_star) * 0.5 * p.squaredNorm();
    };
    ExtractionSpec spec;
    spec.dimension = 2;
    spec.extra_variables = 1;
    spec.x_star = x_star;
    spec.t_star = t_star;
    A3EndpointModel m;
    try {
      m = a3_extract(F, spec);
    } catch (const Error& e) {
      c.add(fmt::format("extraction[{}]", made), false, 0.0, 0.0, e.what());
      ++made;
      continue;
    }
    rows.push_back(examine(fmt::format("extracted{}", made), m));
    ++made;
  }
  details["models"] = rows;

  A3EndpointModel flipped = example_model();
  flipped.beta = -flipped.beta;
  const auto rf = a3_tangent_check(flipped);
  c.add("rejects_exiting_beta", !rf.ok, rf.beta_value, 0.0, rf.diagnostic);
  A3EndpointModel tilted = example_model();
  tilted.gamma(0, 2) = 0.1;
  const auto rt = a3_tangent_check(tilted);
  c.add("rejects_nonzero_gamma", !rt.ok, rt.gamma_max, 1e-8, rt.diagnostic);
  details["negative"] = {{"flipped_beta", tangent_json(rf)}, {"tilted_gamma", tangent_json(rt)}};
  return finish("a3", std::move(c), std::move(details));
}

}  // namespace

//------------------------------------------------------------------------

ConvergenceStudy convergence_study(const FourierSeries& phi0, const ConvergenceSettings& s) {
  if (phi0.dimension() != 1) throw UnsupportedDimension("convergence studies are one-dimensional");
  if (s.nu_list.empty()) throw DomainError("convergence study needs viscosities");
  const HopfLaxPotential hl(phi0, s.cells);
  const double L = phi0.period()[0];
  ConvergenceStudy out;

  std::vector<double> limit(static_cast<std::size_t>(s.grid_points));
  for (int i = 0; i < s.grid_points; ++i)
    limit[static_cast<std::size_t>(i)] = hl.evaluate(make_vec({L * i / s.grid_points}), s.T);
  std::vector<double> sups;
  for (double nu : s.nu_list) {
    const ViscousSolution v(phi0, nu, s.quadrature_points);
    std::vector<double> d(limit.size());
    double mean = 0.0;
    for (int i = 0; i < s.grid_points; ++i) {
      d[static_cast<std::size_t>(i)] = v.psi(L * i / s.grid_points, s.T) - limit[static_cast<std::size_t>(i)];
      mean += d[static_cast<std::size_t>(i)];
    }
    mean /= s.grid_points;
    double sup = 0.0;
    for (double x : d) sup = std::max(sup, std::abs(x - mean));
    out.potential.push_back({nu, sup});
    sups.push_back(sup);
  }
  out.potential_decreasing = strictly_decreasing(sups);

  const auto& tnu = s.trajectory_nu_list.empty() ? s.nu_list : s.trajectory_nu_list;
  std::vector<ViscousSolution> solutions;
  for (double nu : tnu) solutions.emplace_back(phi0, nu, s.quadrature_points);
  const PotentialModel model = hl;
  for (double a : s.starts) {
    TrajectoryConvergence tc;
    tc.start = a;
    std::vector<ViscousPolyline> lines;
    for (const auto& sol : solutions) {
      lines.push_back(viscous_trajectory(sol, a, s.trajectory_T, s.step));
      tc.viscous_endpoints.push_back(lines.back().back().x);
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      double gap = 0.0;
      for (std::size_t k = 0; k < std::min(lines[i].size(), lines[i - 1].size()); ++k)
        gap = std::max(gap, std::abs(lines[i][k].x - lines[i - 1][k].x));
      tc.consecutive_gaps.push_back(gap);
    }
    tc.gaps_decreasing = strictly_decreasing(tc.consecutive_gaps);
    const LimitTrajectory lt = integrate(model, make_vec({a}), 0.0, s.trajectory_T, s.step, s.tol);
    tc.limit_endpoint = lt.positions.back()[0];
    tc.endpoint_gap = std::abs(tc.limit_endpoint - tc.viscous_endpoints.back());
    out.trajectories.push_back(std::move(tc));
  }
  return out;
}

json to_json(const ConvergenceStudy& study) {
  json pot = json::array();
  for (const auto& r : study.potential) pot.push_back({{"nu", r.nu}, {"sup_difference", r.sup_difference}});
  json tr = json::array();
  for (const auto& t : study.trajectories)
    tr.push_back({{"start", t.start},
                  {"viscous_endpoints", t.viscous_endpoints},
                  {"consecutive_gaps", t.consecutive_gaps},
                  {"limit_endpoint", t.limit_endpoint},
                  {"endpoint_gap", t.endpoint_gap},
                  {"gaps_decreasing", t.gaps_decreasing}});
  return {{"potential", pot}, {"potential_decreasing", study.potential_decreasing}, {"trajectories", tr}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"convergence", "uniqueness", "geometry", "hgrad", "semiconcavity", "a3"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  SuiteResult r;
  if (name == "convergence") r = convergence_suite(options);
  else if (name == "uniqueness") r = uniqueness_suite(options);
  else if (name == "geometry") r = geometry_suite(options);
  else if (name == "hgrad") r = hgrad_suite(options);
  else if (name == "semiconcavity") r = semiconcavity_suite(options);
  else if (name == "a3") r = a3_suite(options);
  else throw std::invalid_argument("unknown suite '" + name + "'");
  r.report["seed"] = options.seed;
  return r;
}

std::string serialize_report(const SuiteResult& result) { return result.report.dump(2) + "\n"; }

}  // namespace adhesion
