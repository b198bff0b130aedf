#include "adhesion/cluster_events.hpp"

#include "adhesion/errors.hpp"
#include "adhesion/trajectory.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>

namespace adhesion {

const char* to_string(ClusterEventKind k) {
  switch (k) {
    case ClusterEventKind::Birth: return "birth";
    case ClusterEventKind::Release: return "release";
    case ClusterEventKind::PassThrough: return "pass_through";
    case ClusterEventKind::Merge: return "merge";
  }
  return "?";
}

namespace {

MomentumSet as_set(const std::array<Vec, 3>& p) { return MomentumSet{p[0], p[1], p[2]}; }

// Change of (g > 0) on [lo, hi], shrunk to width <= width.
template <class Fn>
double bisect(const Fn& g, double lo, double hi, double width) {
  const bool pos_lo = g(lo) > 0.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    ((g(mid) > 0.0) == pos_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ClusterScan detect_cluster_events(const MomentumPath& path, double t_begin, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > t_begin)) throw DomainError("need dt > 0 and t_end > t_begin");
  auto cosine = [&](double t) {
    const auto p = path(t);
    return min_angle_cosine(p[0], p[1], p[2]);
  };
  ClusterScan scan;
  const auto n = static_cast<long>(std::ceil((t_end - t_begin) / dt - 1e-9));
  double t_prev = t_begin;
  double c_prev = cosine(t_begin);
  bool right_prev = std::abs(c_prev) < kRightAngleBand;
  std::optional<double> growing_since;
  if (c_prev > 0.0) growing_since = t_begin;
  for (long k = 1; k <= n; ++k) {
    const double t = std::min(t_end, t_begin + static_cast<double>(k) * dt);
    const double c = cosine(t);
    const bool right = std::abs(c) < kRightAngleBand;
    if (right && right_prev)
      throw GenericityViolation(fmt::format("triangle stays right-angled on [{}, {}]", t_prev, t));
    if ((c > 0.0) != (c_prev > 0.0)) {
      const double te = bisect(cosine, t_prev, t, dt * 1e-3);
      const auto p = path(te);
      const bool birth = c > 0.0;
      scan.events.push_back({birth ? ClusterEventKind::Birth : ClusterEventKind::Release, te, Vec::Zero(2),
                             as_set(p), Transition::None});
      if (birth) {
        growing_since = te;
      } else if (growing_since) {
        scan.clusters.push_back({ClusterState::Growing, *growing_since, te, Vec::Zero(2), Vec::Zero(2)});
        growing_since.reset();
      }
    }
    t_prev = t;
    c_prev = c;
    right_prev = right;
  }
  if (growing_since) scan.clusters.push_back({ClusterState::Growing, *growing_since, t_end, Vec::Zero(2), Vec::Zero(2)});
  return scan;
}

namespace {

struct NodeState {
  Vec position;
  std::array<Vec, 3> momenta;
  double min_cos = 0.0;
};

// Triple tie of branches (i, j, m) near `guess`, minimal among all branches.
std::optional<NodeState> locate_node(const PotentialModel& model, const std::array<std::size_t, 3>& ids,
                                     Vec guess, double t, double tol) {
  for (int it = 0; it < 40; ++it) {
    const auto bs = branches(model, guess, t);
    Eigen::Matrix2d J;
    Eigen::Vector2d r;
    for (int row = 0; row < 2; ++row) {
      const auto& b = bs[ids[static_cast<std::size_t>(row + 1)]];
      J.row(row) = (b.momentum - bs[ids[0]].momentum).transpose();
      r[row] = b.value - bs[ids[0]].value;
    }
    if (std::abs(J.determinant()) < 1e-14) return std::nullopt;
    const Eigen::Vector2d step = J.partialPivLu().solve(r);
    guess -= step;
    if (step.norm() <= 1e-14 * std::max(1.0, guess.norm())) break;
  }
  const auto bs = branches(model, guess, t);
  double best = bs.front().value;
  for (const auto& b : bs) best = std::min(best, b.value);
  NodeState s;
  s.position = guess;
  for (int v = 0; v < 3; ++v) {
    const auto& b = bs[ids[static_cast<std::size_t>(v)]];
    if (b.value > best + tol) return std::nullopt;
    s.momenta[static_cast<std::size_t>(v)] = b.momentum;
  }
  if (collinear(s.momenta[0], s.momenta[1], s.momenta[2])) return std::nullopt;
  s.min_cos = min_angle_cosine(s.momenta[0], s.momenta[1], s.momenta[2]);
  return s;
}

Vec linear_guess(const PotentialModel& model, const std::array<std::size_t, 3>& ids, double t) {
  const Vec origin = Vec::Zero(2);
  const auto bs = branches(model, origin, t);
  Eigen::Matrix2d J;
  Eigen::Vector2d r;
  for (int row = 0; row < 2; ++row) {
    const auto& b = bs[ids[static_cast<std::size_t>(row + 1)]];
    J.row(row) = (b.momentum - bs[ids[0]].momentum).transpose();
    r[row] = b.value - bs[ids[0]].value;
  }
  if (std::abs(J.determinant()) < 1e-14) return origin;
  return -J.partialPivLu().solve(r);
}

}  // namespace

ClusterScan detect_cluster_events(const PotentialModel& model, const std::vector<Vec>& seeds, double t_begin,
                                  double t_end, double dt, double tol) {
  if (dimension(model) != 2) throw DimensionMismatch("cluster scans are planar");
  if (std::holds_alternative<HopfLaxPotential>(model) || std::holds_alternative<A3EndpointModel>(model))
    throw InvalidModel("cluster scans need a finite family or a local linear model");
  if (!(dt > 0.0) || !(t_end > t_begin)) throw DomainError("need dt > 0 and t_end > t_begin");
  if (tol < 0.0) tol = default_tolerance(model);
  ClusterScan scan;
  const std::size_t k = branches(model, Vec::Zero(2), t_begin).size();
  const auto n = static_cast<long>(std::ceil((t_end - t_begin) / dt - 1e-9));

  // Nodes: Birth / Release when a tracked node triangle changes type.
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t m = j + 1; m < k; ++m) {
        const std::array<std::size_t, 3> ids{i, j, m};
        std::optional<NodeState> prev;
        double t_prev = t_begin;
        std::optional<double> growing_since;
        Vec growing_at;
        for (long s = 0; s <= n; ++s) {
          const double t = std::min(t_end, t_begin + static_cast<double>(s) * dt);
          const Vec guess = prev ? prev->position : linear_guess(model, ids, t);
          auto cur = locate_node(model, ids, guess, t, tol);
          if (cur && cur->min_cos > 0.0 && !growing_since) {
            growing_since = t;
            growing_at = cur->position;
          }
          if (prev && cur && (cur->min_cos > 0.0) != (prev->min_cos > 0.0)) {
            const Vec start = prev->position;
            auto g = [&](double tt) {
              const auto st = locate_node(model, ids, start, tt, tol);
              return st ? st->min_cos : prev->min_cos;
            };
            const double te = bisect(g, t_prev, t, dt * 1e-3);
            const auto st = locate_node(model, ids, start, te, tol);
            const Vec where = st ? st->position : cur->position;
            const bool birth = cur->min_cos > 0.0;
            scan.events.push_back({birth ? ClusterEventKind::Birth : ClusterEventKind::Release, te, where,
                                   MomentumSet{cur->momenta[0], cur->momenta[1], cur->momenta[2]},
                                   Transition::None});
            if (birth) {
              growing_since = te;
              growing_at = where;
            } else if (growing_since) {
              scan.clusters.push_back({ClusterState::Growing, *growing_since, te, growing_at, where});
              growing_since.reset();
            }
          }
          if (!cur && prev && growing_since && prev->min_cos > 0.0) {
            scan.clusters.push_back({ClusterState::Growing, *growing_since, t_prev, growing_at, prev->position});
            growing_since.reset();
          }
          prev = cur;
          t_prev = t;
        }
        if (growing_since && prev && prev->min_cos > 0.0)
          scan.clusters.push_back({ClusterState::Growing, *growing_since, t_end, growing_at, prev->position});
      }

  // Particles: stable clusters travelling along edges.
  for (const auto& seed : seeds) {
    const auto tr = integrate(model, seed, t_begin, t_end, dt, tol);
    std::optional<std::size_t> stable_from;
    std::optional<std::size_t> at_node_from;
    for (std::size_t s = 0; s < tr.size(); ++s) {
      const int support = tr.support_counts[s];
      const bool stable = tr.merge_flags[s] && support == 2;
      if (stable && !stable_from) stable_from = s;
      if (support >= 3 && !at_node_from && stable_from) {
        at_node_from = s;
        const auto act = active_momenta(model, tr.positions[s], tr.times[s], tol);
        const auto& p = act.elements();
        const bool trapping = act.size() == 3 && min_angle_cosine(p[0], p[1], p[2]) > 0.0;
        if (trapping) {
          scan.events.push_back({ClusterEventKind::Merge, tr.times[s], tr.positions[s], act, Transition::None});
          scan.clusters.push_back({ClusterState::Stable, tr.times[*stable_from], tr.times[s],
                                   tr.positions[*stable_from], tr.positions[s]});
          stable_from.reset();
        }
      }
      if (support == 2 && at_node_from) {
        const std::size_t a = *at_node_from;
        const auto act = active_momenta(model, tr.positions[a], tr.times[a], tol);
        scan.events.push_back({ClusterEventKind::PassThrough, tr.times[a], tr.positions[a], act, Transition::None});
        at_node_from.reset();
      }
    }
    if (stable_from)
      scan.clusters.push_back({ClusterState::Stable, tr.times[*stable_from], tr.times.back(),
                               tr.positions[*stable_from], tr.positions.back()});
  }
  std::stable_sort(scan.events.begin(), scan.events.end(),
                   [](const ClusterEvent& a, const ClusterEvent& b) { return a.time < b.time; });
  return scan;
}

std::optional<ClusterEvent> transition_event(const LocalLinearModel& model) {
  const auto info = classify_configuration(model.momenta());
  if (info.cls == ConfigClass::TotallyObtuse) return std::nullopt;
  return ClusterEvent{info.cls == ConfigClass::Narrow ? ClusterEventKind::Release : ClusterEventKind::Birth, 0.0,
                      Vec::Zero(2), model.momenta(), info.transition};
}

}  // namespace adhesion
