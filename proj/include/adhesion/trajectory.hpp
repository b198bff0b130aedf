#pragma once

#include "adhesion/potential_model.hpp"

#include <string>
#include <vector>

namespace adhesion {

struct LimitTrajectory {
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<Vec> velocities;   // limit_velocity at each sample
  std::vector<bool> merge_flags; // sticky once set
  std::vector<int> active_counts;
  std::vector<int> support_counts; // boundary points of the velocity ball

  std::size_t size() const { return times.size(); }
};

/// One-way Euler with adhesion. A particle whose branch stops being minimal
/// inside a step is stopped at the tie (bisection along the step) and
/// continues with the new ball-centre velocity; a particle on a shock is
/// pulled back onto the tie of its supporting branches after each step.
/// tol < 0 selects the model default.
LimitTrajectory integrate(const PotentialModel& model, const Vec& x0, double t0, double T, double step,
                          double tol = -1.0);

struct UniquenessReport {
  bool met = false;
  double meet_time = 0.0;
  double post_meet_gap = 0.0;
  double velocity_bound = 0.0;
  double bound = 0.0;  // 2 step B
  bool pass = false;
};

/// t_meet_tol <= 0 selects step B; velocity_bound <= 0 measures B as the
/// largest recorded speed.
UniquenessReport forward_uniqueness_check(const PotentialModel& model, const Vec& xa, const Vec& xb, double t0,
                                          double T, double step, double t_meet_tol = 0.0,
                                          double velocity_bound = 0.0, double tol = -1.0);

struct ReachabilityReport {
  std::vector<Vec> preimages;
  std::string warning;  // set when nothing was found on the sample grid
};

/// Initial points at time t0 whose trajectories pass through x_star at
/// t_star (d = 1). Shooting over sample_count starts in [x_star - radius,
/// x_star + radius]; a run of starts that all land on x_star is reported by
/// its two ends, isolated crossings are refined by bisection.
ReachabilityReport backward_reachability(const PotentialModel& model, const Vec& x_star, double t_star,
                                         int sample_count, double t0 = 0.0, double step = 1e-3,
                                         double radius = 0.0, double tol = -1.0);

}  // namespace adhesion
