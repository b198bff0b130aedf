#pragma once

#include "adhesion/convex_core.hpp"
#include "adhesion/extended_real.hpp"
#include "adhesion/types.hpp"

#include <functional>
#include <vector>

namespace adhesion {

/// h(P) = L.P + P^T M P / 2 with M symmetric positive semidefinite.
class Hamiltonian {
 public:
  Hamiltonian(Vec linear_part, Mat quadratic_part);

  /// h(p, sigma) = |p|^2/2 + sigma on momenta of dimension space_dim + 1.
  static Hamiltonian burgers(int space_dim);

  int dimension() const { return static_cast<int>(linear_.size()); }
  const Vec& linear_part() const { return linear_; }
  const Mat& quadratic_part() const { return quadratic_; }

  double value(const Vec& momentum) const;
  /// The velocity h'(P) = L + M P.
  Vec differential(const Vec& momentum) const;
  /// Legendre transform; +infinity off the affine subspace L + range(M).
  ExtendedReal lagrangian(const Vec& velocity) const;

  /// Orthonormal basis of range(M) and the matching positive eigenvalues.
  const Mat& range_basis() const { return range_basis_; }
  const Vec& range_eigenvalues() const { return range_eigenvalues_; }

 private:
  Vec linear_;
  Mat quadratic_;
  Mat range_basis_;
  Mat null_basis_;
  Vec range_eigenvalues_;
};

/// phi = e - f with f convex; known through values and sub-differential
/// generating sets.
struct SemiconcavePotential {
  int dimension = 0;
  std::function<double(const Vec&)> evaluate;
  std::function<MomentumSet(const Vec&)> subdifferential;
  Mat quadratic_bound;  // e as a matrix: e(X) = X^T E X / 2
};

struct QuadraticPiece {
  double constant = 0.0;
  Vec linear;
  Mat hessian;  // may be empty for affine pieces
};

/// min over pieces; semiconcave with e = (largest Hessian eigenvalue) * I / 2.
/// A piece is active when its value is within active_tol of the minimum.
SemiconcavePotential min_of_pieces(std::vector<QuadraticPiece> pieces, double active_tol = 1e-9);

/// Minimizer of h over conv(generators), mapped through h'. Faces of the
/// generator hull are searched exhaustively; all minimizers found must give
/// the same velocity (checked).
Vec h_gradient(const MomentumSet& generators, const Hamiltonian& hamiltonian);
Vec h_gradient(const SemiconcavePotential& potential, const Hamiltonian& hamiltonian, const Vec& X);

struct GridSpec {
  double spacing = 1e-3;
  double radius = 0.0;  // 0: derived from the sub-differential bound
};

/// Grid argmin of l(Q) - phi'_X(Q) over Q in L + range(M). Coarse-to-fine
/// lattice search (the objective is convex); the final lattice has the
/// requested spacing in the range(M) eigen-coordinates.
Vec h_gradient_lagrangian(const SemiconcavePotential& potential, const Hamiltonian& hamiltonian,
                          const Vec& X, const GridSpec& grid = {});

class FlowMap {
 public:
  FlowMap(SemiconcavePotential potential, Hamiltonian hamiltonian, double step = 1e-3);

  const SemiconcavePotential& potential() const { return potential_; }
  const Hamiltonian& hamiltonian() const { return hamiltonian_; }
  double step() const { return step_; }

 private:
  SemiconcavePotential potential_;
  Hamiltonian hamiltonian_;
  double step_;
};

struct FlowSample {
  double t = 0.0;
  Vec X;
};
using Polyline = std::vector<FlowSample>;

/// One-way Euler polyline X_{k+1} = X_k + step * grad_h phi(X_k) on [0, T].
/// The last step is shortened when T is not a multiple of the step.
Polyline flow(const FlowMap& map, const Vec& X0, double T);

struct InvarianceReport {
  double constant_shift = 0.0;  // g_{phi+c} vs g_phi
  double translation = 0.0;     // g_{phi(X - X_s)}(X0 + X_s) vs g_phi(X0) + X_s
  double semigroup = 0.0;       // g^{t1+t2} vs g^{t1} o g^{t2}
  double dilation = 0.0;        // g^{lambda t}_{lambda phi(X/lambda)}(lambda X0) vs lambda g^t_phi(X0)
  double max() const;
};

/// Max violation of each invariance over the polyline of length T from X0.
/// The dilated flow uses step lambda * step, the time grid being dilated
/// together with X and the potential. t_shift is rounded to whole steps.
InvarianceReport invariance_suite(const FlowMap& map, const Vec& X0, double T, double lambda,
                                  const Vec& X_shift, double t_shift, double constant);

}  // namespace adhesion
