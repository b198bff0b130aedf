#include "adhesion/svg.hpp"

#include "adhesion/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <optional>

namespace adhesion {

namespace {

// Parameter interval of origin + s dir inside the square [-e, e]^2.
std::optional<std::pair<double, double>> clip(const Vec& o, const Vec& d, double lo, double hi, double e) {
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (std::abs(o[k]) > e) return std::nullopt;
      continue;
    }
    double a = (-e - o[k]) / d[k], b = (e - o[k]) / d[k];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  if (!(lo < hi)) return std::nullopt;
  return std::pair{lo, hi};
}

}  // namespace

std::string render_svg(const SvgScene& scene, const SvgStyle& style) {
  const auto& cx = scene.complex;
  if (cx.tau == 0.0) throw DegenerateConfiguration("cannot draw a diagram at tau = 0");
  const double inv = 1.0 / std::abs(cx.tau);
  const double u = style.units_per_velocity;
  const double half = style.extent * u;
  auto X = [&](double v) { return fmt::format("{:.3f}", v * u); };
  auto Y = [&](double v) { return fmt::format("{:.3f}", -v * u); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<!-- shock diagram at tau = {}; {} user units per velocity unit; positions drawn as q/|tau|; origin at "
      "centre; y up -->\n",
      cx.tau, u);
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0:.0f}\" height=\"{0:.0f}\" "
      "viewBox=\"{1:.3f} {1:.3f} {0:.3f} {0:.3f}\">\n",
      2.0 * half, -half);
  out += "<defs><marker id=\"arrow\" markerWidth=\"8\" markerHeight=\"8\" refX=\"7\" refY=\"4\" orient=\"auto\">"
         "<path d=\"M0,0 L8,4 L0,8 z\" fill=\"black\"/></marker></defs>\n";

  for (const auto& e : cx.edges) {
    const Vec o = e.origin * inv;
    const auto seg = clip(o, e.direction, e.s_min * inv, e.s_max * inv, style.extent);
    if (!seg) continue;
    const Vec a = o + seg->first * e.direction;
    const Vec b = o + seg->second * e.direction;
    out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       X(a[0]), Y(a[1]), X(b[0]), Y(b[1]));
  }
  if (scene.mark_nodes)
    for (const auto& n : cx.nodes) {
      if (n.info.cls != NodeClass::Acute) continue;
      const Vec p = n.position * inv;
      out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{:.1f}\" fill=\"black\" stroke=\"black\"/>\n", X(p[0]),
                         Y(p[1]), style.disk_radius);
    }
  for (const auto& pt : scene.particles) {
    const Vec p = pt.position * inv;
    const Vec tip = p + style.arrow_scale * pt.velocity;
    if (pt.velocity.norm() > 1e-12)
      out += fmt::format(
          "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\" "
          "marker-end=\"url(#arrow)\"/>\n",
          X(p[0]), Y(p[1]), X(tip[0]), Y(tip[1]));
    const char* fill = pt.cluster == ClusterState::Growing ? "black" : "white";
    const double r = pt.cluster == ClusterState::None ? 0.5 * style.disk_radius : style.disk_radius;
    out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"{:.1f}\" fill=\"{}\" stroke=\"black\"/>\n", X(p[0]), Y(p[1]),
                       r, fill);
  }
  out += "</svg>\n";
  return out;
}

}  // namespace adhesion
