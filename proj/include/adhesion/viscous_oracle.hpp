#pragma once

#include "adhesion/fourier_series.hpp"
#include "adhesion/types.hpp"

#include <cstdint>
#include <vector>

namespace adhesion {

/// psi_t + psi_x^2/2 = nu psi_xx on the line with periodic psi(., 0) = phi0
/// (d = 1), by the Cole-Hopf heat-kernel integral. The kernel is normalized,
/// so psi(., 0) = phi0 and the spatial means agree at t = 0.
class ViscousSolution {
 public:
  ViscousSolution(FourierSeries phi0, double nu, int quadrature_points = 4096);

  const FourierSeries& phi0() const { return phi0_; }
  double nu() const { return nu_; }
  int quadrature_points() const { return points_; }

  double psi(double x, double t) const;
  /// Weighted mean of (x - a)/t under the log-sum-exp weights.
  double velocity(double x, double t) const;

 private:
  struct Sums {
    double log_sum;  // log of sum w exp(-f / 2nu)
    double mean_momentum;
  };
  Sums accumulate(double x, double t, bool need_momentum) const;

  FourierSeries phi0_;
  double nu_;
  int points_;
  std::vector<double> table_;
};

struct ViscousSample {
  double t = 0.0;
  double x = 0.0;
};
using ViscousPolyline = std::vector<ViscousSample>;

/// RK4 for y' = psi_x(y, t), y(0) = a, on [0, T].
ViscousPolyline viscous_trajectory(const ViscousSolution& s, double a, double T, double step);

struct SemiconcavityReport {
  double max_second_difference = 0.0;
  double at_x = 0.0;
  double at_t = 0.0;
  double direction = 0.0;  // angle of Q = (cos, sin) in the (x, t) plane
  double bound = 0.0;
  bool violated = false;
};

/// Second difference quotients [f(X + dQ) - 2 f(X) + f(X - dQ)] / d^2 over
/// `samples` random (x, t) with t in [delta, T] and Q at angles k pi / n,
/// k = 0..n-1. `bound` + tol is the pass threshold.
template <class Fn>
SemiconcavityReport second_difference_scan(const Fn& f, double period, double T, int directions, double delta,
                                           int samples, std::uint64_t seed, double bound, double tol);

SemiconcavityReport second_derivative_bound_check(const ViscousSolution& s, double T, int directions,
                                                  double delta, int samples, std::uint64_t seed, double bound,
                                                  double tol = 1e-2);

/// max over x and unit space-time Q of psi_QQ at t = 0 (from phi0 and its
/// derivatives through the equation); nu = 0 gives the inviscid value.
double initial_spacetime_curvature(const FourierSeries& phi0, double nu, int samples = 4096);

}  // namespace adhesion

#include "adhesion/detail/second_difference.hpp"
