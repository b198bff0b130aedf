#pragma once

#include "adhesion/limit_potential.hpp"
#include "adhesion/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace adhesion {

/// Truncated normal form near a shock end point, in local coordinates (q, tau):
///   phi = p*.q - tau(|p*|^2/2 + U) + min over (a, b) of
///         A a^4 + 2 sum B_i a^2 b_i + sum C_ij b_i b_j
///         + alpha a + beta a^2 + sum gamma_i b_i.
/// Linear forms act on the stacked vector (q, tau) of size d + 1; gamma holds
/// one form per row.
struct A3EndpointModel {
  double A = 1.0;
  Vec B;  // k
  Mat C;  // k x k
  Vec alpha;
  Vec beta;
  Mat gamma;  // k x (d + 1)
  Vec p_star;
  double force = 0.0;

  int dimension() const { return static_cast<int>(p_star.size()); }
  int extra_variables() const { return static_cast<int>(B.size()); }
};

/// Throws InvalidModel unless C is positive definite, the form in (a^2, b) is
/// positive definite and all shapes agree.
void validate(const A3EndpointModel& model);

double apply_form(const Vec& form, const Vec& q, double tau);

struct A3Halfplane {
  Vec alpha;  // the hyperplane alpha(q, tau) = 0
  /// det [[beta, gamma^T], [B, C]] at (q, tau)
  std::function<double(const Vec&, double)> determinant;
  /// alpha = 0 within alpha_tol and determinant <= det_tol
  bool contains(const Vec& q, double tau, double alpha_tol = 1e-9, double det_tol = 1e-12) const;
};

A3Halfplane a3_shock_halfplane(const A3EndpointModel& model);

struct A3TangentReport {
  bool ok = false;
  double alpha_value = 0.0;   // alpha(p*, 1)
  double gamma_max = 0.0;     // max |gamma_i(p*, 1)|
  double beta_value = 0.0;    // beta(p*, 1)
  double determinant = 0.0;   // bordered determinant at (p*, 1)
  std::string diagnostic;
};

A3TangentReport a3_tangent_check(const A3EndpointModel& model, double tol = 1e-8);

/// Local minima of the reduced quartic over a (b eliminated), as branches of
/// the model at (q, tau). key = (a).
std::vector<Branch> a3_branches(const A3EndpointModel& model, const Vec& q, double tau);
std::optional<Branch> a3_follow(const A3EndpointModel& model, const Branch& branch, const Vec& q, double tau);

/// F(xi, x, t) with xi = (a, b_1..b_k).
using GeneratingFamily = std::function<double(const Vec& xi, const Vec& x, double t)>;

struct ExtractionSpec {
  int dimension = 2;
  int extra_variables = 1;
  Vec x_star;
  double t_star = 0.0;
  double force = 0.0;
  double step_xi = 2e-2;  // derivatives in xi
  double step = 1e-3;     // derivatives in (x, t)
};

/// Finite-difference extraction of the normal-form coefficients of F at
/// xi = 0, (x*, t*).
A3EndpointModel a3_extract(const GeneratingFamily& F, const ExtractionSpec& spec);

}  // namespace adhesion
