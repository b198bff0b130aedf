#include "adhesion/shock_geometry.hpp"

#include "adhesion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adhesion {

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Acute: return "acute";
    case NodeClass::Obtuse: return "obtuse";
    case NodeClass::RightDegenerate: return "right";
  }
  return "?";
}

const char* to_string(ConfigClass c) {
  switch (c) {
    case ConfigClass::TotallyObtuse: return "totally_obtuse";
    case ConfigClass::Narrow: return "narrow";
    case ConfigClass::Wide: return "wide";
  }
  return "?";
}

const char* to_string(Transition t) {
  switch (t) {
    case Transition::None: return "none";
    case Transition::Fifth: return "fifth";
    case Transition::Sixth: return "sixth";
  }
  return "?";
}

const char* to_string(ClusterState s) {
  switch (s) {
    case ClusterState::None: return "none";
    case ClusterState::Stable: return "stable";
    case ClusterState::Growing: return "growing";
  }
  return "?";
}

double min_angle_cosine(const Momentum& p1, const Momentum& p2, const Momentum& p3) {
  const Momentum* p[3] = {&p1, &p2, &p3};
  double best = 1.0;
  for (int v = 0; v < 3; ++v) {
    const Vec a = *p[(v + 1) % 3] - *p[v];
    const Vec b = *p[(v + 2) % 3] - *p[v];
    best = std::min(best, a.dot(b) / (a.norm() * b.norm()));
  }
  return best;
}

NodeInfo classify_node(const Momentum& p1, const Momentum& p2, const Momentum& p3) {
  NodeInfo info;
  info.node_velocity = circumcenter(p1, p2, p3);  // throws on collinear input
  info.particle_velocity = min_enclosing_ball(MomentumSet{p1, p2, p3}).center;
  info.min_cos = min_angle_cosine(p1, p2, p3);
  if (std::abs(info.min_cos) < kRightAngleBand) {
    info.cls = NodeClass::RightDegenerate;
  } else {
    info.cls = info.min_cos > 0.0 ? NodeClass::Acute : NodeClass::Obtuse;
  }
  return info;
}

namespace {

double cross(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

bool inside_triangle(const Vec& x, const Vec& a, const Vec& b, const Vec& c) {
  const double d1 = cross(b - a, x - a);
  const double d2 = cross(c - b, x - b);
  const double d3 = cross(a - c, x - c);
  return (d1 > 0 && d2 > 0 && d3 > 0) || (d1 < 0 && d2 < 0 && d3 < 0);
}

}  // namespace

ConfigurationInfo classify_configuration(const MomentumSet& momenta) {
  if (momenta.size() != 4) throw DimensionMismatch("a configuration has exactly four distinct momenta");
  check_planar_genericity(momenta);
  const auto& p = momenta.elements();
  ConfigurationInfo info;
  const int drop_order[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  bool all_obtuse = true;
  for (int i = 0; i < 4; ++i) {
    const auto* t = drop_order[i];
    info.sub_triangles[static_cast<std::size_t>(i)] = classify_node(p[t[0]], p[t[1]], p[t[2]]).cls;
    all_obtuse = all_obtuse && info.sub_triangles[static_cast<std::size_t>(i)] == NodeClass::Obtuse;
  }
  const Ball ball = min_enclosing_ball(momenta);
  info.support_size = static_cast<int>(ball_support(momenta, ball).size());
  info.narrow = info.support_size == 2;
  int interior = 0;
  for (int i = 0; i < 4; ++i) {
    const auto* t = drop_order[i];
    if (inside_triangle(p[static_cast<std::size_t>(i)], p[t[0]], p[t[1]], p[t[2]])) ++interior;
  }
  info.hull_size = 4 - interior;
  info.transition = info.hull_size == 3 ? Transition::Fifth : Transition::Sixth;
  if (all_obtuse) {
    if (!info.narrow) throw std::logic_error("totally obtuse configuration that is not narrow");
    info.cls = ConfigClass::TotallyObtuse;
    info.post_transition_cluster = ClusterState::None;
  } else if (info.narrow) {
    info.cls = ConfigClass::Narrow;
    info.post_transition_cluster = ClusterState::Stable;
  } else {
    info.cls = ConfigClass::Wide;
    info.post_transition_cluster = ClusterState::Growing;
  }
  return info;
}

ShockComplex shock_diagram(const LocalLinearModel& model, double tau) {
  if (tau == 0.0) throw DegenerateConfiguration("the shock diagram is degenerate at tau = 0");
  const auto& set = model.momenta();
  if (set.dimension() != 2) throw DimensionMismatch("shock diagrams are planar");
  if (set.size() > 8) throw UnsupportedDimension("shock diagrams support at most 8 momenta");
  const auto& p = set.elements();
  const std::size_t k = p.size();
  auto f = [&](std::size_t i, const Vec& q) { return p[i].dot(q) - 0.5 * tau * p[i].squaredNorm(); };
  const double scale = std::max(1.0, std::abs(tau)) * std::max(1.0, set.coordinate_scale() * set.coordinate_scale());
  const double eps = 1e-12 * scale;

  ShockComplex out;
  out.tau = tau;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const Vec n = p[i] - p[j];
      const double c = 0.5 * tau * (p[i].squaredNorm() - p[j].squaredNorm());
      ShockEdge e;
      e.i = i;
      e.j = j;
      e.origin = n * (c / n.squaredNorm());
      e.direction = make_vec({-n[1], n[0]}) / n.norm();
      e.velocity = 0.5 * (p[i] + p[j]);
      bool empty = false;
      for (std::size_t l = 0; l < k && !empty; ++l) {
        if (l == i || l == j) continue;
        // f_i - f_l <= 0 along origin + s direction
        const double a = f(i, e.origin) - f(l, e.origin);
        const double b = (p[i] - p[l]).dot(e.direction);
        if (std::abs(b) <= 1e-14 * std::max(1.0, set.coordinate_scale())) {
          empty = a > eps;
        } else if (b > 0.0) {
          e.s_max = std::min(e.s_max, -a / b);
        } else {
          e.s_min = std::max(e.s_min, -a / b);
        }
      }
      if (empty || !(e.s_min < e.s_max - 1e-12 * std::max(1.0, std::abs(tau)))) continue;
      out.edges.push_back(e);
    }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t m = j + 1; m < k; ++m) {
        const Vec q = tau * circumcenter(p[i], p[j], p[m]);
        const double v = f(i, q);
        bool minimal = true;
        for (std::size_t l = 0; l < k && minimal; ++l)
          if (l != i && l != j && l != m) minimal = v <= f(l, q) + eps;
        if (!minimal) continue;
        out.nodes.push_back({{i, j, m}, q, classify_node(p[i], p[j], p[m])});
      }
  std::vector<bool> owns(k, k == 1);
  for (const auto& e : out.edges) owns[e.i] = owns[e.j] = true;
  for (std::size_t i = 0; i < k; ++i)
    if (owns[i]) out.cells.push_back(i);
  if (tau > 0.0) out.special_point = tau * min_enclosing_ball(set).center;
  return out;
}

}  // namespace adhesion
