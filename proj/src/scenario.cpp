#include "adhesion/scenario.hpp"

#include "adhesion/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

namespace adhesion {

using nlohmann::json;

const char* to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::HopfLax1D: return "HopfLax1D";
    case ScenarioKind::LocalModel: return "LocalModel";
    case ScenarioKind::FiniteMinFamily: return "FiniteMinFamily";
    case ScenarioKind::A3: return "A3";
    case ScenarioKind::ConvergenceStudy: return "ConvergenceStudy";
  }
  return "?";
}

namespace {

bool same(const Vec& a, const Vec& b) { return a.size() == b.size() && (a.size() == 0 || a == b); }
bool same(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same(a[i], b[i])) return false;
  return true;
}

bool same(const A3EndpointModel& a, const A3EndpointModel& b) {
  return a.A == b.A && same(a.B, b.B) && same(a.C, b.C) && same(a.alpha, b.alpha) && same(a.beta, b.beta) &&
         same(a.gamma, b.gamma) && same(a.p_star, b.p_star) && a.force == b.force;
}

// Field access with the JSON pointer of the current node.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(path_, msg); }

  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.is_object()) fail("expected an object");
    if (!j_.contains(key)) throw ConfigError(path_ + "/" + key, "required field is missing");
    return Node(j_.at(key), path_ + "/" + key);
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i)); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  void only(std::initializer_list<const char*> keys) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!allowed.count(it.key())) throw ConfigError(path_ + "/" + it.key(), "unknown field");
  }

  double number() const {
    if (!j_.is_number()) fail("expected a number");
    const double v = j_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::string text() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  Vec vec() const {
    Vec v(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) v[static_cast<Eigen::Index>(i)] = at(i).number();
    return v;
  }
  Mat mat() const {
    const std::size_t rows = size();
    Mat m;
    for (std::size_t r = 0; r < rows; ++r) {
      const Vec row = at(r).vec();
      if (r == 0) m.resize(static_cast<Eigen::Index>(rows), row.size());
      if (row.size() != m.cols()) at(r).fail("rows must have equal length");
      m.row(static_cast<Eigen::Index>(r)) = row.transpose();
    }
    return m;
  }
  std::vector<Vec> vecs() const {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).vec());
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vec(m.row(r).transpose())));
  return a;
}

ScenarioKind parse_kind(const Node& n) {
  const std::string s = n.text();
  for (auto k : {ScenarioKind::HopfLax1D, ScenarioKind::LocalModel, ScenarioKind::FiniteMinFamily, ScenarioKind::A3,
                 ScenarioKind::ConvergenceStudy})
    if (s == to_string(k)) return k;
  n.fail("unknown kind '" + s + "'");
}

void parse_fourier(const Node& p, ScenarioConfig& c) {
  p.only({"period", "modes", "cells", "quadrature_points", "grid_points"});
  c.period = p.at("period").number();
  if (!(c.period > 0.0)) p.at("period").fail("period must be positive");
  const Node modes = p.at("modes");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Node m = modes.at(i);
    m.only({"k", "cos", "sin"});
    FourierMode mode;
    mode.k = {m.at("k").integer()};
    if (m.has("cos")) mode.cos_amp = m.at("cos").number();
    if (m.has("sin")) mode.sin_amp = m.at("sin").number();
    c.modes.push_back(mode);
  }
  if (p.has("cells")) {
    c.cells = p.at("cells").integer();
    if (c.cells < 16) p.at("cells").fail("at least 16 cells per period");
  }
  if (p.has("quadrature_points")) {
    c.quadrature_points = p.at("quadrature_points").integer();
    if (c.quadrature_points < 256) p.at("quadrature_points").fail("at least 256 quadrature points");
  }
  if (p.has("grid_points")) {
    c.grid_points = p.at("grid_points").integer();
    if (c.grid_points < 8) p.at("grid_points").fail("at least 8 grid points");
  }
}

}  // namespace

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  auto modes_equal = [](const std::vector<FourierMode>& x, const std::vector<FourierMode>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].k != y[i].k || x[i].cos_amp != y[i].cos_amp || x[i].sin_amp != y[i].sin_amp) return false;
    return true;
  };
  auto branches_equal = [](const std::vector<HJBranch>& x, const std::vector<HJBranch>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].constant != y[i].constant || !same(x[i].momentum, y[i].momentum) ||
          x[i].curvature != y[i].curvature || !same(x[i].center, y[i].center))
        return false;
    return true;
  };
  const bool a3_equal = a.a3.has_value() == b.a3.has_value() && (!a.a3 || same(*a.a3, *b.a3));
  return a.kind == b.kind && a.name == b.name && a.period == b.period && modes_equal(a.modes, b.modes) &&
         a.cells == b.cells && a.quadrature_points == b.quadrature_points && a.grid_points == b.grid_points &&
         a.nu_list == b.nu_list && same(a.momenta, b.momenta) && branches_equal(a.branches, b.branches) &&
         a3_equal && a.force == b.force && a.time.t0 == b.time.t0 && a.time.T == b.time.T &&
         a.time.step == b.time.step && same(a.particles, b.particles) && a.outputs == b.outputs &&
         a.svg_times == b.svg_times && a.tolerance == b.tolerance;
}

ScenarioConfig parse_config(const json& doc) {
  const Node root(doc, "");
  root.only({"kind", "name", "potential", "nu_list", "time", "particles", "outputs", "svg_times", "tolerance"});
  ScenarioConfig c;
  c.kind = parse_kind(root.at("kind"));
  if (root.has("name")) c.name = root.at("name").text();

  const Node p = root.at("potential");
  int dim = 1;
  switch (c.kind) {
    case ScenarioKind::HopfLax1D:
    case ScenarioKind::ConvergenceStudy:
      parse_fourier(p, c);
      break;
    case ScenarioKind::LocalModel: {
      p.only({"momenta", "force"});
      c.momenta = p.at("momenta").vecs();
      if (c.momenta.empty()) p.at("momenta").fail("need at least one momentum");
      dim = static_cast<int>(c.momenta.front().size());
      for (std::size_t i = 0; i < c.momenta.size(); ++i)
        if (c.momenta[i].size() != dim) p.at("momenta").at(i).fail("momenta must share one dimension");
      if (p.has("force")) c.force = p.at("force").number();
      break;
    }
    case ScenarioKind::FiniteMinFamily: {
      p.only({"branches", "force"});
      const Node bs = p.at("branches");
      if (bs.size() == 0) bs.fail("need at least one branch");
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const Node b = bs.at(i);
        b.only({"constant", "momentum", "curvature", "center"});
        HJBranch br;
        if (b.has("constant")) br.constant = b.at("constant").number();
        br.momentum = b.at("momentum").vec();
        if (b.has("curvature")) br.curvature = b.at("curvature").number();
        if (b.has("center")) br.center = b.at("center").vec();
        if (i == 0) dim = static_cast<int>(br.momentum.size());
        if (br.momentum.size() != dim || (br.center.size() && br.center.size() != dim))
          b.fail("branches must share one dimension");
        c.branches.push_back(br);
      }
      if (p.has("force")) c.force = p.at("force").number();
      break;
    }
    case ScenarioKind::A3: {
      p.only({"A", "B", "C", "alpha", "beta", "gamma", "p_star", "force"});
      A3EndpointModel m;
      m.A = p.at("A").number();
      m.B = p.has("B") ? p.at("B").vec() : Vec();
      m.C = p.has("C") && p.at("C").size() ? p.at("C").mat() : Mat(0, 0);
      m.alpha = p.at("alpha").vec();
      m.beta = p.at("beta").vec();
      m.gamma = p.has("gamma") && p.at("gamma").size() ? p.at("gamma").mat() : Mat(0, m.alpha.size());
      m.p_star = p.at("p_star").vec();
      if (p.has("force")) m.force = p.at("force").number();
      c.force = m.force;
      c.a3 = m;
      dim = static_cast<int>(m.p_star.size());
      break;
    }
  }

  if (root.has("nu_list")) {
    const Node n = root.at("nu_list");
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double v = n.at(i).number();
      if (!(v > 0.0)) n.at(i).fail("viscosities must be positive");
      if (i > 0 && !(v < c.nu_list.back())) n.at(i).fail("nu_list must be strictly decreasing");
      c.nu_list.push_back(v);
    }
  }
  if (c.kind == ScenarioKind::ConvergenceStudy && c.nu_list.size() < 2)
    throw ConfigError("/nu_list", "a convergence study needs at least two viscosities");

  const Node t = root.at("time");
  t.only({"t0", "T", "step"});
  if (t.has("t0")) c.time.t0 = t.at("t0").number();
  c.time.T = t.at("T").number();
  if (t.has("step")) c.time.step = t.at("step").number();
  if (!(c.time.step > 0.0)) t.at("step").fail("step must be positive");
  if (!(c.time.T >= c.time.t0)) t.at("T").fail("T must not precede t0");
  if ((c.kind == ScenarioKind::HopfLax1D || c.kind == ScenarioKind::ConvergenceStudy) && c.time.t0 < 0.0)
    t.at("t0").fail("Hopf-Lax scenarios start at t0 >= 0");
  if (c.kind == ScenarioKind::ConvergenceStudy && !(c.time.T > 0.0)) t.at("T").fail("T must be positive");

  if (root.has("particles")) {
    c.particles = root.at("particles").vecs();
    for (std::size_t i = 0; i < c.particles.size(); ++i)
      if (c.particles[i].size() != dim)
        root.at("particles").at(i).fail(fmt::format("particle must have dimension {}", dim));
  }
  if (root.has("outputs")) {
    c.outputs.clear();
    const Node o = root.at("outputs");
    for (std::size_t i = 0; i < o.size(); ++i) {
      const std::string s = o.at(i).text();
      if (s != "csv" && s != "svg" && s != "report") o.at(i).fail("outputs are csv, svg or report");
      c.outputs.push_back(s);
    }
  }
  if (root.has("svg_times")) {
    const Node s = root.at("svg_times");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = s.at(i).number();
      if (v == 0.0) s.at(i).fail("the diagram is degenerate at tau = 0");
      c.svg_times.push_back(v);
    }
  }
  if (root.has("tolerance")) {
    c.tolerance = root.at("tolerance").number();
    if (!(c.tolerance > 0.0)) root.at("tolerance").fail("tolerance must be positive");
  }
  build_model(c);  // model-level validation
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json serialize_config(const ScenarioConfig& c) {
  json j;
  j["kind"] = to_string(c.kind);
  if (!c.name.empty()) j["name"] = c.name;
  json p = json::object();
  switch (c.kind) {
    case ScenarioKind::HopfLax1D:
    case ScenarioKind::ConvergenceStudy: {
      p["period"] = c.period;
      json modes = json::array();
      for (const auto& m : c.modes) modes.push_back({{"k", m.k.at(0)}, {"cos", m.cos_amp}, {"sin", m.sin_amp}});
      p["modes"] = modes;
      if (c.cells) p["cells"] = c.cells;
      p["quadrature_points"] = c.quadrature_points;
      p["grid_points"] = c.grid_points;
      break;
    }
    case ScenarioKind::LocalModel: {
      json ms = json::array();
      for (const auto& m : c.momenta) ms.push_back(to_json(m));
      p["momenta"] = ms;
      p["force"] = c.force;
      break;
    }
    case ScenarioKind::FiniteMinFamily: {
      json bs = json::array();
      for (const auto& b : c.branches) {
        json o = {{"constant", b.constant}, {"momentum", to_json(b.momentum)}, {"curvature", b.curvature}};
        if (b.center.size()) o["center"] = to_json(b.center);
        bs.push_back(o);
      }
      p["branches"] = bs;
      p["force"] = c.force;
      break;
    }
    case ScenarioKind::A3: {
      const auto& m = *c.a3;
      p = {{"A", m.A},         {"B", to_json(m.B)},         {"C", to_json(m.C)},
           {"alpha", to_json(m.alpha)}, {"beta", to_json(m.beta)}, {"gamma", to_json(m.gamma)},
           {"p_star", to_json(m.p_star)}, {"force", m.force}};
      break;
    }
  }
  j["potential"] = p;
  if (!c.nu_list.empty()) j["nu_list"] = c.nu_list;
  j["time"] = {{"t0", c.time.t0}, {"T", c.time.T}, {"step", c.time.step}};
  json parts = json::array();
  for (const auto& x : c.particles) parts.push_back(to_json(x));
  j["particles"] = parts;
  j["outputs"] = c.outputs;
  if (!c.svg_times.empty()) j["svg_times"] = c.svg_times;
  if (c.tolerance > 0.0) j["tolerance"] = c.tolerance;
  return j;
}

FourierSeries build_series(const ScenarioConfig& c) {
  return FourierSeries(Vec::Constant(1, c.period), c.modes);
}

PotentialModel build_model(const ScenarioConfig& c) {
  try {
    switch (c.kind) {
      case ScenarioKind::HopfLax1D:
      case ScenarioKind::ConvergenceStudy:
        return HopfLaxPotential(build_series(c), c.cells);
      case ScenarioKind::LocalModel:
        return LocalLinearModel(MomentumSet(c.momenta), c.force);
      case ScenarioKind::FiniteMinFamily:
        return FiniteMinFamily(c.branches, c.force);
      case ScenarioKind::A3: {
        A3EndpointModel m = *c.a3;
        validate(m);
        return m;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("/potential", e.what());
  }
  throw ConfigError("/kind", "unsupported kind");
}

}  // namespace adhesion
