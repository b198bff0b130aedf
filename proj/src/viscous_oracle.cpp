#include "adhesion/viscous_oracle.hpp"

#include "adhesion/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace adhesion {

ViscousSolution::ViscousSolution(FourierSeries phi0, double nu, int quadrature_points)
    : phi0_(std::move(phi0)), nu_(nu), points_(quadrature_points) {
  if (phi0_.dimension() != 1) throw UnsupportedDimension("the viscous oracle is one-dimensional");
  if (!(nu_ > 0.0) || !std::isfinite(nu_)) throw DomainError("viscosity must be positive");
  if (points_ < 256) throw DomainError("at least 256 quadrature points per period are required");
  const double h = phi0_.period()[0] / points_;
  table_.resize(static_cast<std::size_t>(points_));
  for (int j = 0; j < points_; ++j) table_[static_cast<std::size_t>(j)] = phi0_.value(make_vec({j * h}));
}

ViscousSolution::Sums ViscousSolution::accumulate(double x, double t, bool need_momentum) const {
  const double L = phi0_.period()[0];
  const double two_nu = 2.0 * nu_;
  // Terms with penalty beyond the oscillation plus 80 nu carry weight < e^-40.
  const double W = std::sqrt(2.0 * t * (2.0 * phi0_.amplitude_bound() + 80.0 * nu_));
  const double table_h = L / points_;
  const double kernel_h = 0.5 * std::sqrt(2.0 * nu_ * t);
  const bool aligned = table_h <= kernel_h;
  const double h = aligned ? table_h : L / std::ceil(L / kernel_h);
  const auto j0 = static_cast<long>(std::floor((x - W) / h));
  const auto j1 = static_cast<long>(std::ceil((x + W) / h));
  const auto n = static_cast<std::size_t>(j1 - j0 + 1);
  std::vector<double> e(n);
  double emax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const long j = j0 + static_cast<long>(i);
    const double a = static_cast<double>(j) * h;
    double phi;
    if (aligned) {
      long r = j % points_;
      if (r < 0) r += points_;
      phi = table_[static_cast<std::size_t>(r)];
    } else {
      phi = phi0_.value(make_vec({a}));
    }
    e[i] = -(phi + (x - a) * (x - a) / (2.0 * t)) / two_nu;
    emax = std::max(emax, e[i]);
  }
  double sum = 0.0, msum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::exp(e[i] - emax);
    sum += w;
    if (need_momentum) {
      const double a = static_cast<double>(j0 + static_cast<long>(i)) * h;
      msum += w * (x - a) / t;
    }
  }
  const double log_weight = std::log(h / std::sqrt(4.0 * std::numbers::pi * nu_ * t));
  return Sums{emax + std::log(sum) + log_weight, need_momentum ? msum / sum : 0.0};
}

double ViscousSolution::psi(double x, double t) const {
  if (!(t >= 0.0)) throw DomainError("viscous potential needs t >= 0");
  if (t == 0.0) return phi0_.value(make_vec({x}));
  return -2.0 * nu_ * accumulate(x, t, false).log_sum;
}

double ViscousSolution::velocity(double x, double t) const {
  if (!(t >= 0.0)) throw DomainError("viscous velocity needs t >= 0");
  if (t == 0.0) return phi0_.gradient(make_vec({x}))[0];
  return accumulate(x, t, true).mean_momentum;
}

ViscousPolyline viscous_trajectory(const ViscousSolution& s, double a, double T, double step) {
  if (!(step > 0.0)) throw DomainError("step must be positive");
  if (!(T >= 0.0)) throw DomainError("horizon must be nonnegative");
  ViscousPolyline out{{0.0, a}};
  const auto full = static_cast<long>(std::floor(T / step + 1e-9));
  double y = a;
  auto rk4 = [&](double t, double h) {
    const double k1 = s.velocity(y, t);
    const double k2 = s.velocity(y + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = s.velocity(y + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = s.velocity(y + h * k3, t + h);
    y += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  };
  for (long k = 0; k < full; ++k) {
    rk4(static_cast<double>(k) * step, step);
    out.push_back({static_cast<double>(k + 1) * step, y});
  }
  const double last = static_cast<double>(full) * step;
  if (T - last > 1e-12 * step) {
    rk4(last, T - last);
    out.push_back({T, y});
  }
  return out;
}

SemiconcavityReport second_derivative_bound_check(const ViscousSolution& s, double T, int directions,
                                                  double delta, int samples, std::uint64_t seed, double bound,
                                                  double tol) {
  if (!(delta > 0.0) || !(T > delta)) throw DomainError("need 0 < delta < T");
  return second_difference_scan([&](double x, double t) { return s.psi(x, t); }, s.phi0().period()[0], T,
                                directions, delta, samples, seed, bound, tol);
}

double initial_spacetime_curvature(const FourierSeries& phi0, double nu, int samples) {
  if (phi0.dimension() != 1) throw UnsupportedDimension("initial curvature is computed for d = 1");
  const double L = phi0.period()[0];
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double x = L * i / samples;
    const Vec X = make_vec({x});
    const double u = phi0.gradient(X)[0];
    const double u1 = phi0.hessian(X)(0, 0);
    const double u2 = phi0.third_derivative(x);
    const double u3 = phi0.fourth_derivative(x);
    // psi_t = nu psi_xx - psi_x^2 / 2 differentiated at t = 0
    const double pxt = nu * u2 - u * u1;
    const double pxxt = nu * u3 - u1 * u1 - u * u2;
    const double ptt = nu * pxxt - u * pxt;
    Eigen::Matrix2d H;
    H << u1, pxt, pxt, ptt;
    best = std::max(best, Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(H).eigenvalues().maxCoeff());
  }
  return best;
}

}  // namespace adhesion
