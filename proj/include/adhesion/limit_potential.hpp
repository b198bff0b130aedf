#pragma once

#include "adhesion/convex_core.hpp"
#include "adhesion/fourier_series.hpp"
#include "adhesion/types.hpp"

#include <optional>
#include <vector>

namespace adhesion {

/// One smooth local solution taking part in a minimum representation.
/// key identifies the branch: the minimizer a for Hopf-Lax and A3 models,
/// the branch index for finite families.
struct Branch {
  double value = 0.0;
  Vec momentum;
  Vec key;
};

/// phi = c0 - U t + (p0.y + a|y|^2/2) / (1 + a t) - t |p0|^2 / (2 (1 + a t)),
/// y = x - center. Solves phi_t + |grad phi|^2/2 + U = 0 where 1 + a t > 0.
/// curvature = 0 gives the affine solution c0 + p0.y - (|p0|^2/2 + U) t.
struct HJBranch {
  double constant = 0.0;
  Vec momentum;
  double curvature = 0.0;
  Vec center;  // empty: origin

  double value(const Vec& x, double t, double force) const;
  Vec gradient(const Vec& x, double t) const;
  double time_derivative(const Vec& x, double t, double force) const;
  /// phi_t + |grad phi|^2/2 + U; zero up to rounding.
  double residual(const Vec& x, double t, double force) const;
  bool defined_at(double t) const { return 1.0 + curvature * t > 0.0; }
};

class FiniteMinFamily {
 public:
  /// Checks the HJ residual (<= 1e-10) at sampled points of each branch.
  FiniteMinFamily(std::vector<HJBranch> branches, double force = 0.0);

  int dimension() const { return static_cast<int>(branches_.front().momentum.size()); }
  const std::vector<HJBranch>& branches() const { return branches_; }
  double force() const { return force_; }

  std::vector<Branch> evaluate_branches(const Vec& x, double t) const;
  Branch branch(std::size_t index, const Vec& x, double t) const;

 private:
  std::vector<HJBranch> branches_;
  double force_;
};

/// min_i { p_i.q - tau |p_i|^2/2 } - U tau in local coordinates (q, tau).
class LocalLinearModel {
 public:
  /// Planar models are checked for genericity: no three momenta on a line, no
  /// four on a circle, no right triangle. check_genericity = false skips it
  /// (used for deliberately degenerate inputs).
  LocalLinearModel(MomentumSet momenta, double force = 0.0, bool check_genericity = true);

  int dimension() const { return momenta_.dimension(); }
  const MomentumSet& momenta() const { return momenta_; }
  double force() const { return force_; }

  double value(const Vec& q, double tau) const;
  std::vector<Branch> evaluate_branches(const Vec& q, double tau) const;

 private:
  MomentumSet momenta_;
  double force_;
};

/// Throws GenericityViolation naming the first violated planar condition.
void check_planar_genericity(const MomentumSet& momenta);

/// Right-angle band for triangle classification.
inline constexpr double kRightAngleBand = 1e-9;

double local_model_derivative(const LocalLinearModel& model, const Vec& q, double tau);

/// phi(x, t) = min_a phi0(a) + |x - a|^2 / (2t) on R^d with periodic phi0.
class HopfLaxPotential {
 public:
  /// cells_per_period = 0 selects 2048 for d = 1 and 256 for d = 2.
  explicit HopfLaxPotential(FourierSeries phi0, int cells_per_period = 0);

  int dimension() const { return phi0_.dimension(); }
  const FourierSeries& phi0() const { return phi0_; }
  int cells_per_period() const { return cells_; }

  double evaluate(const Vec& x, double t) const;
  /// All refined local minimizers competing for the global minimum, sorted by
  /// value. At t = 0 the single branch a = x.
  std::vector<Branch> evaluate_branches(const Vec& x, double t) const;
  /// Newton continuation of a minimizer to (x, t); empty when it stops being a
  /// nondegenerate local minimum.
  std::optional<Branch> follow(const Branch& branch, const Vec& x, double t) const;
  /// Default active-set tolerance 1e-6 * max(1, oscillation).
  double default_tolerance() const;

 private:
  double table_value(const std::vector<long>& index) const;
  Branch make_branch(const Vec& a, const Vec& x, double t) const;
  std::vector<Branch> branches_1d(double x, double t) const;
  std::vector<Branch> branches_2d(const Vec& x, double t) const;
  std::optional<Vec> newton_minimizer(Vec a, const Vec& x, double t, int max_iter) const;

  FourierSeries phi0_;
  int cells_;
  std::vector<double> table_;
};

/// Shock points of a 1-d Hopf-Lax potential at time t on one period starting
/// at x_begin, located by scanning `samples` points for minimizer jumps and
/// bisecting on the tie of the two branches.
std::vector<double> find_shocks_1d(const HopfLaxPotential& potential, double t, double x_begin,
                                   int samples = 1024);

}  // namespace adhesion
