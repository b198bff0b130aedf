#pragma once

#include "adhesion/convex_core.hpp"
#include "adhesion/limit_potential.hpp"

#include <array>
#include <limits>
#include <vector>

namespace adhesion {

enum class NodeClass { Acute, Obtuse, RightDegenerate };
enum class ConfigClass { TotallyObtuse, Narrow, Wide };
enum class Transition { None, Fifth, Sixth };
enum class ClusterState { None, Stable, Growing };

const char* to_string(NodeClass c);
const char* to_string(ConfigClass c);
const char* to_string(Transition t);
const char* to_string(ClusterState s);

struct NodeInfo {
  NodeClass cls = NodeClass::Acute;
  Vec node_velocity;      // circumcentre of the momenta
  Vec particle_velocity;  // centre of their minimal disk
  double min_cos = 0.0;   // smallest cosine of the triangle's angles
};

/// Throws DegenerateConfiguration for collinear momenta.
NodeInfo classify_node(const Momentum& p1, const Momentum& p2, const Momentum& p3);

/// Smallest cosine among the three angles; negative iff obtuse.
double min_angle_cosine(const Momentum& p1, const Momentum& p2, const Momentum& p3);

struct ConfigurationInfo {
  ConfigClass cls = ConfigClass::Narrow;
  Transition transition = Transition::None;
  ClusterState post_transition_cluster = ClusterState::None;
  bool narrow = true;  // disk boundary through exactly two momenta
  int support_size = 2;
  int hull_size = 4;
  std::array<NodeClass, 4> sub_triangles{};
};

/// Four planar momenta; throws GenericityViolation naming the violated condition.
ConfigurationInfo classify_configuration(const MomentumSet& momenta);

struct ShockEdge {
  std::size_t i = 0, j = 0;  // tied momenta
  Vec origin;                // point on the supporting line
  Vec direction;             // unit vector along the line
  double s_min = -std::numeric_limits<double>::infinity();
  double s_max = std::numeric_limits<double>::infinity();
  Vec velocity;  // midpoint of p_i and p_j

  bool bounded() const { return std::isfinite(s_min) && std::isfinite(s_max); }
  Vec point(double s) const { return origin + s * direction; }
};

struct ShockNode {
  std::array<std::size_t, 3> indices{};
  Vec position;
  NodeInfo info;
};

struct ShockComplex {
  double tau = 0.0;
  std::vector<std::size_t> cells;  // momenta owning a nonempty cell
  std::vector<ShockEdge> edges;
  std::vector<ShockNode> nodes;
  Vec special_point;  // tau > 0: tau * minimal-disk centre, on the shock; empty for tau < 0
};

/// Tie structure of min_i {p_i.q - tau |p_i|^2/2}: for tau > 0 the
/// farthest-point diagram of {p_i tau}, for tau < 0 the nearest-point one.
/// Up to 8 momenta.
ShockComplex shock_diagram(const LocalLinearModel& model, double tau);

}  // namespace adhesion
