#include "adhesion/trajectory.hpp"

#include "adhesion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adhesion {

namespace {

constexpr int kProjectionIterations = 3;
constexpr int kMaxSubsteps = 8;
constexpr int kBisections = 50;

double lowest(const std::vector<Branch>& bs) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& b : bs) v = std::min(v, b.value);
  return v;
}

// Continue every branch to (x, t); false when one of them ceased to exist.
bool follow_all(const PotentialModel& model, std::vector<Branch>& set, const Vec& x, double t) {
  for (auto& b : set) {
    auto next = follow(model, b, x, t);
    if (!next) return false;
    b = std::move(*next);
  }
  return true;
}

// Least-norm Newton steps towards equal values of all branches in `set`.
Vec project_to_tie(const PotentialModel& model, std::vector<Branch> set, Vec x, double t) {
  if (set.size() < 2) return x;
  const auto m = static_cast<Eigen::Index>(set.size() - 1);
  if (m > x.size()) return x;
  for (int it = 0; it < kProjectionIterations; ++it) {
    if (!follow_all(model, set, x, t)) return x;
    Mat J(m, x.size());
    Vec r(m);
    double scale = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& b = set[static_cast<std::size_t>(j + 1)];
      J.row(j) = (b.momentum - set[0].momentum).transpose();
      r[j] = b.value - set[0].value;
      scale = std::max(scale, std::abs(b.value));
    }
    if (r.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
    const Eigen::CompleteOrthogonalDecomposition<Mat> cod(J);
    if (cod.rank() < m) return x;
    x -= cod.solve(r);
  }
  return x;
}

struct StepResult {
  Vec x;
  bool snapped = false;
};

// Advance (x, t) by dt.
StepResult advance(const PotentialModel& model, Vec x, double t, double dt, double tol) {
  StepResult out;
  double remaining = dt;
  for (int sub = 0; sub < kMaxSubsteps && remaining > 0.0; ++sub) {
    const auto act = active_branches(model, x, t, tol);
    std::vector<Momentum> ps;
    for (const auto& b : act) ps.push_back(b.momentum);
    const MomentumSet set(ps);
    const Ball ball = min_enclosing_ball(set);
    std::vector<Branch> support;
    for (auto i : ball_support(set, ball))
      for (const auto& b : act)
        if (b.momentum == set[i]) {
          support.push_back(b);
          break;
        }
    const Vec v = ball.center;
    const double t1 = t + remaining;
    Vec x1 = x + remaining * v;
    if (support.size() >= 2) x1 = project_to_tie(model, support, x1, t1);

    auto on_support = [&](const Vec& xs, double ts) {
      std::vector<Branch> s = support;
      if (!follow_all(model, s, xs, ts)) return false;
      return lowest(s) <= lowest(branches(model, xs, ts)) + tol;
    };
    if (sub + 1 == kMaxSubsteps || on_support(x1, t1)) {
      x = x1;
      remaining = 0.0;
      break;
    }
    // Another branch took over inside the step: stop at the tie.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < kBisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      (on_support(x + mid * remaining * v, t + mid * remaining) ? lo : hi) = mid;
    }
    if (lo == 0.0) {  // the old support cannot be continued at all: accept the step
      x = x1;
      remaining = 0.0;
      break;
    }
    const double ts = t + lo * remaining;
    Vec xs = x + lo * remaining * v;
    xs = project_to_tie(model, active_branches(model, xs, ts, tol), xs, ts);
    out.snapped = true;
    x = xs;
    remaining -= lo * remaining;
    t = ts;
  }
  out.x = std::move(x);
  return out;
}

void record(LimitTrajectory& traj, const PotentialModel& model, const Vec& x, double t, double tol, bool merged) {
  const auto act = active_branches(model, x, t, tol);
  std::vector<Momentum> ps;
  for (const auto& b : act) ps.push_back(b.momentum);
  const MomentumSet set(ps);
  const Ball ball = min_enclosing_ball(set);
  traj.times.push_back(t);
  traj.positions.push_back(x);
  traj.velocities.push_back(ball.center);
  traj.active_counts.push_back(static_cast<int>(set.size()));
  traj.support_counts.push_back(static_cast<int>(ball_support(set, ball).size()));
  const bool prev = !traj.merge_flags.empty() && traj.merge_flags.back();
  traj.merge_flags.push_back(prev || merged || set.size() >= 2);
}

}  // namespace

LimitTrajectory integrate(const PotentialModel& model, const Vec& x0, double t0, double T, double step, double tol) {
  if (!(step > 0.0)) throw DomainError("step must be positive");
  if (!(T >= t0)) throw DomainError("final time must not precede the initial time");
  if (x0.size() != dimension(model)) throw DimensionMismatch("initial point dimension mismatch");
  if (tol < 0.0) tol = default_tolerance(model);
  LimitTrajectory traj;
  const auto full = static_cast<long>(std::floor((T - t0) / step + 1e-9));
  record(traj, model, x0, t0, tol, false);
  Vec x = x0;
  for (long k = 0; k < full; ++k) {
    const double t = t0 + static_cast<double>(k) * step;
    const auto r = advance(model, x, t, step, tol);
    x = r.x;
    record(traj, model, x, t0 + static_cast<double>(k + 1) * step, tol, r.snapped);
  }
  const double last = t0 + static_cast<double>(full) * step;
  if (T - last > 1e-12 * step) {
    const auto r = advance(model, x, last, T - last, tol);
    record(traj, model, r.x, T, tol, r.snapped);
  }
  return traj;
}

UniquenessReport forward_uniqueness_check(const PotentialModel& model, const Vec& xa, const Vec& xb, double t0,
                                          double T, double step, double t_meet_tol, double velocity_bound,
                                          double tol) {
  const auto a = integrate(model, xa, t0, T, step, tol);
  const auto b = integrate(model, xb, t0, T, step, tol);
  UniquenessReport r;
  double B = velocity_bound;
  if (B <= 0.0) {
    for (const auto* tr : {&a, &b})
      for (const auto& v : tr->velocities) B = std::max(B, v.norm());
    B = std::max(B, 1e-12);
  }
  r.velocity_bound = B;
  r.bound = 2.0 * step * B;
  const double meet = t_meet_tol > 0.0 ? t_meet_tol : step * B;
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t first = n;
  for (std::size_t k = 0; k < n; ++k)
    if ((a.positions[k] - b.positions[k]).norm() <= meet) {
      first = k;
      break;
    }
  if (first == n) return r;
  r.met = true;
  r.meet_time = a.times[first];
  for (std::size_t k = first + 1; k < n; ++k)
    r.post_meet_gap = std::max(r.post_meet_gap, (a.positions[k] - b.positions[k]).norm());
  r.pass = r.post_meet_gap <= r.bound;
  return r;
}

ReachabilityReport backward_reachability(const PotentialModel& model, const Vec& x_star, double t_star,
                                         int sample_count, double t0, double step, double radius, double tol) {
  if (dimension(model) != 1) throw UnsupportedDimension("backward reachability is implemented for d = 1");
  if (!(t_star > t0)) throw DomainError("target time must follow the initial time");
  if (sample_count < 2) throw DomainError("need at least two samples");
  if (radius <= 0.0) {
    double B = 0.0;
    if (const auto* hl = std::get_if<HopfLaxPotential>(&model)) {
      B = hl->phi0().gradient_bound();
    } else {
      for (const auto& b : branches(model, x_star, t_star)) B = std::max(B, b.momentum.norm());
    }
    radius = 1.1 * B * (t_star - t0) + 10.0 * step;
  }
  const double x0 = x_star[0];
  auto land = [&](double a) {
    const auto tr = integrate(model, make_vec({a}), t0, t_star, step, tol);
    return tr.positions.back()[0] - x0;
  };
  const double eps = 1e-9 * std::max(1.0, std::abs(x0));
  std::vector<double> a(static_cast<std::size_t>(sample_count)), f(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = x0 - radius + 2.0 * radius * static_cast<double>(i) / (sample_count - 1);
    f[i] = land(a[i]);
  }
  ReachabilityReport out;
  auto add = [&](double v) {
    for (const auto& p : out.preimages)
      if (std::abs(p[0] - v) <= 1e-9) return;
    out.preimages.push_back(make_vec({v}));
  };
  std::size_t i = 0;
  while (i < a.size()) {
    if (std::abs(f[i]) <= eps) {
      std::size_t j = i;
      while (j + 1 < a.size() && std::abs(f[j + 1]) <= eps) ++j;
      add(a[i]);
      add(a[j]);
      i = j + 1;
      continue;
    }
    if (i + 1 < a.size() && std::abs(f[i + 1]) > eps && (f[i] < 0.0) != (f[i + 1] < 0.0)) {
      double lo = a[i], hi = a[i + 1];
      const bool rising = f[i] < 0.0;
      double best = lo, best_f = std::abs(f[i]);
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = land(mid);
        if (std::abs(fm) < best_f) {
          best = mid;
          best_f = std::abs(fm);
        }
        if (std::abs(fm) <= eps) break;
        ((fm < 0.0) == rising ? lo : hi) = mid;
      }
      if (best_f <= 1e3 * eps) add(best);
    }
    ++i;
  }
  std::sort(out.preimages.begin(), out.preimages.end(), [](const Vec& p, const Vec& q) { return p[0] < q[0]; });
  if (out.preimages.empty()) out.warning = "no preimage found on the sample grid; refine sample_count or radius";
  return out;
}

}  // namespace adhesion
