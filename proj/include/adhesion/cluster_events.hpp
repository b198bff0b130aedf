#pragma once

#include "adhesion/potential_model.hpp"
#include "adhesion/shock_geometry.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace adhesion {

enum class ClusterEventKind { Birth, Release, PassThrough, Merge };
const char* to_string(ClusterEventKind k);

struct ClusterEvent {
  ClusterEventKind kind = ClusterEventKind::Birth;
  double time = 0.0;
  Vec location;
  MomentumSet configuration;
  Transition transition = Transition::None;
};

struct ClusterRecord {
  ClusterState state = ClusterState::Growing;
  double t_begin = 0.0;
  double t_end = 0.0;
  Vec start;
  Vec end;
};

struct ClusterScan {
  std::vector<ClusterEvent> events;
  std::vector<ClusterRecord> clusters;
};

/// Momenta of one node triangle as functions of time, in the node frame (the
/// node sits at the origin).
using MomentumPath = std::function<std::array<Vec, 3>(double)>;

/// Birth when the triangle turns acute, Release when it turns obtuse,
/// localized by bisection on the smallest angle cosine to dt * 1e-3. Every
/// acute interval is a growing cluster. Throws GenericityViolation when the
/// triangle stays right-angled over consecutive samples.
ClusterScan detect_cluster_events(const MomentumPath& path, double t_begin, double t_end, double dt);

/// Planar scan of a finite family or local model: triple-tie nodes are
/// tracked for Birth/Release, and the particles started at `seeds` are
/// followed as limit trajectories. A stable cluster reaching an obtuse node
/// and leaving it is a PassThrough; one that stays at an acute node is a Merge.
ClusterScan detect_cluster_events(const PotentialModel& model, const std::vector<Vec>& seeds, double t_begin,
                                  double t_end, double dt, double tol = -1.0);

/// The cluster leaving the origin after the transition of a four-momentum
/// local model: Release (stable) for narrow, Birth (growing) for wide, none for
/// totally obtuse configurations.
std::optional<ClusterEvent> transition_event(const LocalLinearModel& model);

}  // namespace adhesion
