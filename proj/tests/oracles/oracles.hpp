#pragma once

// Independent reference computations for the unit and acceptance tests.
// Deliberately brute force: no code shared with the library beyond Vec.

#include "adhesion/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using adhesion::Vec;

// psi_t = -psi_x^2/2 + nu psi_xx on a periodic grid, explicit Euler with
// central differences. Returns psi(., T) at x_i = i L / n.
inline std::vector<double> viscous_fd(const std::function<double(double)>& phi0, double L, double nu, double T,
                                      int n = 512) {
  const double dx = L / n;
  std::vector<double> u(static_cast<std::size_t>(n)), next(u.size());
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = phi0(i * dx);
  const double dt_max = 0.2 * dx * dx / nu;
  const int steps = static_cast<int>(std::ceil(T / dt_max));
  const double dt = T / steps;
  for (int s = 0; s < steps; ++s) {
    for (int i = 0; i < n; ++i) {
      const double l = u[static_cast<std::size_t>((i + n - 1) % n)];
      const double c = u[static_cast<std::size_t>(i)];
      const double r = u[static_cast<std::size_t>((i + 1) % n)];
      const double ux = (r - l) / (2.0 * dx);
      next[static_cast<std::size_t>(i)] = c + dt * (-0.5 * ux * ux + nu * (r - 2.0 * c + l) / (dx * dx));
    }
    u.swap(next);
  }
  return u;
}

// min over a on a dense grid of phi0(a) + (x - a)^2 / (2t), d = 1.
inline double hopf_lax_brute(const std::function<double(double)>& phi0, double x, double t, double L,
                             int n = 200000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = -n; i <= n; ++i) {
    const double a = x + L * i / n;
    best = std::min(best, phi0(a) + (x - a) * (x - a) / (2.0 * t));
  }
  return best;
}

// Smallest enclosing ball by checking every pair and triple (planar or 1-d).
struct BruteBall {
  Vec center;
  double radius = std::numeric_limits<double>::infinity();
};

inline BruteBall enclosing_ball_brute(const std::vector<Vec>& pts) {
  BruteBall best;
  auto consider = [&](const Vec& c) {
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, (p - c).norm());
    if (r < best.radius) best = {c, r};
  };
  if (pts.size() == 1) return {pts[0], 0.0};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      consider(0.5 * (pts[i] + pts[j]));
      if (pts[i].size() != 2) continue;
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        const Vec& a = pts[i];
        const Vec& b = pts[j];
        const Vec& c = pts[k];
        const double d = 2.0 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
        if (std::abs(d) < 1e-14) continue;
        const double b2 = (b - a).squaredNorm(), c2 = (c - a).squaredNorm();
        Vec u(2);
        u[0] = ((c[1] - a[1]) * b2 - (b[1] - a[1]) * c2) / d;
        u[1] = ((b[0] - a[0]) * c2 - (c[0] - a[0]) * b2) / d;
        consider(a + u);
      }
    }
  return best;
}

// Owner of each cell centre of an n x n grid on [lo, hi]^2 under
// argmin_i p_i.q - tau |p_i|^2 / 2, and the midpoints between neighbouring
// cells with different owners.
inline std::vector<Vec> grid_ties(const std::vector<Vec>& p, double tau, double lo, double hi, int n) {
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
  std::vector<Vec> ties;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = lo + (i + 0.5) * h, y = lo + (j + 0.5) * h;
      const auto o = owner(x, y);
      if (i + 1 < n && owner(x + h, y) != o) ties.push_back(adhesion::make_vec({x + 0.5 * h, y}));
      if (j + 1 < n && owner(x, y + h) != o) ties.push_back(adhesion::make_vec({x, y + 0.5 * h}));
    }
  return ties;
}

// Exhaustive argmin over the lattice centre + h Z^d restricted to a window of
// `half` cells in each direction.
inline Vec lattice_argmin_window(const std::function<double(const Vec&)>& f, const Vec& centre, double h,
                                 int half) {
  const int d = static_cast<int>(centre.size());
  std::vector<int> idx(static_cast<std::size_t>(d), -half);
  Vec best = centre;
  double best_value = std::numeric_limits<double>::infinity();
  while (true) {
    Vec q = centre;
    for (int i = 0; i < d; ++i) q[i] += h * idx[static_cast<std::size_t>(i)];
    const double v = f(q);
    if (v < best_value) {
      best_value = v;
      best = q;
    }
    int pos = 0;
    while (pos < d && idx[static_cast<std::size_t>(pos)] == half) idx[static_cast<std::size_t>(pos++)] = -half;
    if (pos == d) break;
    ++idx[static_cast<std::size_t>(pos)];
  }
  return best;
}

}  // namespace oracle
