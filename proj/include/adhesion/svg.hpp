#pragma once

#include "adhesion/shock_geometry.hpp"

#include <string>
#include <vector>

namespace adhesion {

struct SvgParticle {
  Vec position;  // same coordinates as the diagram
  Vec velocity;
  ClusterState cluster = ClusterState::None;
};

struct SvgScene {
  ShockComplex complex;
  std::vector<SvgParticle> particles;
  bool mark_nodes = true;  // black disks at acute nodes
};

struct SvgStyle {
  double extent = 3.0;                // half-width of the view, velocity units
  double units_per_velocity = 100.0;  // user units per velocity unit
  double disk_radius = 6.0;           // user units
  double arrow_scale = 0.5;           // arrow length per unit speed, velocity units
};

/// SVG 1.1 document. Positions are drawn as q / |tau| so the picture is in
/// velocity units, origin at the centre, y axis up.
std::string render_svg(const SvgScene& scene, const SvgStyle& style = {});

}  // namespace adhesion
