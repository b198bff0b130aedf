#include "adhesion/a3_endpoint.hpp"

#include "adhesion/errors.hpp"

#include <fmt/format.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>

namespace adhesion {

void validate(const A3EndpointModel& m) {
  const auto d = m.p_star.size();
  const auto k = m.B.size();
  if (d < 1) throw InvalidModel("p_star must have dimension >= 1");
  if (m.alpha.size() != d + 1 || m.beta.size() != d + 1)
    throw InvalidModel("alpha and beta must be forms on (q, tau)");
  if (m.C.rows() != k || m.C.cols() != k) throw InvalidModel("C must be k x k");
  if (m.gamma.rows() != k || (k > 0 && m.gamma.cols() != d + 1))
    throw InvalidModel("gamma must hold k forms on (q, tau)");
  if (!(m.A > 0.0)) throw InvalidModel("A must be positive");
  Mat form(k + 1, k + 1);
  form(0, 0) = m.A;
  if (k > 0) {
    if ((m.C - m.C.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.C.cwiseAbs().maxCoeff()))
      throw InvalidModel("C must be symmetric");
    Eigen::LLT<Mat> llt(m.C);
    if (llt.info() != Eigen::Success) throw InvalidModel("C must be positive definite");
    form.block(0, 1, 1, k) = m.B.transpose();
    form.block(1, 0, k, 1) = m.B;
    form.block(1, 1, k, k) = m.C;
  }
  Eigen::LLT<Mat> llt(form);
  if (llt.info() != Eigen::Success)
    throw InvalidModel("the quartic-quadratic form is not positive definite in (a^2, b)");
}

double apply_form(const Vec& form, const Vec& q, double tau) {
  return form.head(q.size()).dot(q) + form[q.size()] * tau;
}

bool A3Halfplane::contains(const Vec& q, double tau, double alpha_tol, double det_tol) const {
  return std::abs(apply_form(alpha, q, tau)) <= alpha_tol && determinant(q, tau) <= det_tol;
}

namespace {

double bordered_determinant(const A3EndpointModel& m, const Vec& q, double tau) {
  const auto k = m.B.size();
  Mat M(k + 1, k + 1);
  M(0, 0) = apply_form(m.beta, q, tau);
  for (Eigen::Index i = 0; i < k; ++i) {
    M(0, i + 1) = apply_form(m.gamma.row(i).transpose(), q, tau);
    M(i + 1, 0) = m.B[i];
  }
  if (k > 0) M.block(1, 1, k, k) = m.C;
  return M.determinant();
}

}  // namespace

A3Halfplane a3_shock_halfplane(const A3EndpointModel& model) {
  validate(model);
  A3Halfplane out;
  out.alpha = model.alpha;
  out.determinant = [model](const Vec& q, double tau) { return bordered_determinant(model, q, tau); };
  return out;
}

A3TangentReport a3_tangent_check(const A3EndpointModel& model, double tol) {
  validate(model);
  A3TangentReport r;
  const Vec& p = model.p_star;
  r.alpha_value = apply_form(model.alpha, p, 1.0);
  r.beta_value = apply_form(model.beta, p, 1.0);
  for (Eigen::Index i = 0; i < model.gamma.rows(); ++i)
    r.gamma_max = std::max(r.gamma_max, std::abs(apply_form(model.gamma.row(i).transpose(), p, 1.0)));
  r.determinant = bordered_determinant(model, p, 1.0);
  const double scale = std::max({1.0, model.alpha.norm(), model.beta.norm(), model.gamma.norm()}) *
                       std::max(1.0, p.norm());
  std::vector<std::string> problems;
  if (std::abs(r.alpha_value) > tol * scale) problems.push_back(fmt::format("alpha(p*,1) = {:.3e} != 0", r.alpha_value));
  if (r.gamma_max > tol * scale) problems.push_back(fmt::format("gamma(p*,1) = {:.3e} != 0", r.gamma_max));
  if (!(r.beta_value < 0.0)) problems.push_back("beta(p*,1) >= 0: trajectory exits shock");
  if (!(r.determinant <= 0.0)) problems.push_back("(p*,1) outside the shock half-hyperplane");
  r.ok = problems.empty();
  for (std::size_t i = 0; i < problems.size(); ++i) r.diagnostic += (i ? "; " : "") + problems[i];
  return r;
}

namespace {

struct Reduced {
  double A;      // A - B^T C^-1 B
  double beta;   // beta - B^T C^-1 gamma
  double alpha;
  double shift;  // -gamma^T C^-1 gamma / 4
  Vec gamma;     // gamma values at (q, tau)
};

Reduced reduce(const A3EndpointModel& m, const Vec& q, double tau) {
  Reduced r;
  const auto k = m.B.size();
  r.alpha = apply_form(m.alpha, q, tau);
  r.beta = apply_form(m.beta, q, tau);
  r.A = m.A;
  r.shift = 0.0;
  r.gamma = Vec::Zero(k);
  if (k > 0) {
    for (Eigen::Index i = 0; i < k; ++i) r.gamma[i] = apply_form(m.gamma.row(i).transpose(), q, tau);
    const Eigen::LLT<Mat> llt(m.C);
    const Vec CiB = llt.solve(m.B);
    const Vec Cig = llt.solve(r.gamma);
    r.A -= m.B.dot(CiB);
    r.beta -= m.B.dot(Cig);
    r.shift = -0.25 * r.gamma.dot(Cig);
  }
  return r;
}

Branch make_branch(const A3EndpointModel& m, const Reduced& r, double a, const Vec& q, double tau) {
  const auto d = q.size();
  const auto k = m.B.size();
  Vec b = Vec::Zero(k);
  if (k > 0) b = -Eigen::LLT<Mat>(m.C).solve(a * a * m.B + 0.5 * r.gamma);
  Vec p = m.p_star + a * m.alpha.head(d) + a * a * m.beta.head(d);
  for (Eigen::Index i = 0; i < k; ++i) p += b[i] * m.gamma.row(i).head(d).transpose();
  const double g = r.A * a * a * a * a + r.beta * a * a + r.alpha * a + r.shift;
  const double base = m.p_star.dot(q) - tau * (0.5 * m.p_star.squaredNorm() + m.force);
  return Branch{base + g, p, Vec::Constant(1, a)};
}

double polish(const Reduced& r, double a) {
  for (int it = 0; it < 50; ++it) {
    const double g1 = 4.0 * r.A * a * a * a + 2.0 * r.beta * a + r.alpha;
    const double g2 = 12.0 * r.A * a * a + 2.0 * r.beta;
    if (g2 == 0.0) break;
    const double step = g1 / g2;
    a -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(a))) break;
  }
  return a;
}

}  // namespace

std::vector<Branch> a3_branches(const A3EndpointModel& model, const Vec& q, double tau) {
  if (q.size() != model.dimension()) throw DimensionMismatch("point dimension mismatch");
  const Reduced r = reduce(model, q, tau);
  // critical points: 4A a^3 + 2 beta a + alpha = 0
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(0, 2) = -r.alpha / (4.0 * r.A);
  companion(1, 2) = -2.0 * r.beta / (4.0 * r.A);
  const Eigen::EigenSolver<Eigen::Matrix3d> es(companion, false);
  std::vector<double> roots;
  const double scale = std::max(1.0, companion.cwiseAbs().maxCoeff());
  for (int i = 0; i < 3; ++i) {
    const auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) <= 1e-6 * std::sqrt(scale)) roots.push_back(polish(r, z.real()));
  }
  std::vector<Branch> out;
  for (double a : roots) {
    const double g2 = 12.0 * r.A * a * a + 2.0 * r.beta;
    if (g2 < -1e-12 * std::max(1.0, std::abs(r.beta))) continue;
    bool dup = false;
    for (const auto& b : out) dup = dup || std::abs(b.key[0] - a) < 1e-10;
    if (!dup) out.push_back(make_branch(model, r, a, q, tau));
  }
  if (out.empty()) {  // numerically triple root; the lowest critical point wins
    double best = roots.empty() ? 0.0 : roots.front();
    out.push_back(make_branch(model, r, best, q, tau));
  }
  std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) { return a.value < b.value; });
  return out;
}

std::optional<Branch> a3_follow(const A3EndpointModel& model, const Branch& branch, const Vec& q, double tau) {
  const Reduced r = reduce(model, q, tau);
  const double a = polish(r, branch.key[0]);
  const double g1 = 4.0 * r.A * a * a * a + 2.0 * r.beta * a + r.alpha;
  const double g2 = 12.0 * r.A * a * a + 2.0 * r.beta;
  if (!std::isfinite(a) || g2 < 0.0 || std::abs(g1) > 1e-10 * std::max(1.0, std::abs(r.alpha) + std::abs(r.beta)))
    return std::nullopt;
  return make_branch(model, r, a, q, tau);
}

//================================================
// Coefficient extraction by finite differences
//================================================

namespace {

// Fourth-order central stencils.
template <class Fn>
double d1(const Fn& f, double h) {
  return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h);
}

template <class Fn>
double d2(const Fn& f, double h) {
  return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
}

}  // namespace

A3EndpointModel a3_extract(const GeneratingFamily& F, const ExtractionSpec& spec) {
  const int d = spec.dimension;
  const int k = spec.extra_variables;
  if (d < 1 || k < 0) throw InvalidModel("bad extraction shape");
  const Vec x0 = spec.x_star.size() ? spec.x_star : Vec::Zero(d);
  if (x0.size() != d) throw DimensionMismatch("x_star dimension mismatch");
  const double t0 = spec.t_star;
  const double hx = spec.step;
  const double ha = spec.step_xi;
  const int n = k + 1;
  auto unit = [](int size, int i, double s) {
    Vec v = Vec::Zero(size);
    v[i] = s;
    return v;
  };
  // F at xi with the space-time coordinate c (c == d means t) shifted by s
  auto Fs = [&](const Vec& xi, int c, double s) {
    if (c < 0) return F(xi, x0, t0);
    if (c < d) return F(xi, x0 + unit(d, c, s), t0);
    return F(xi, x0, t0 + s);
  };
  const Vec zero = Vec::Zero(n);

  A3EndpointModel m;
  m.force = spec.force;
  m.p_star.resize(d);
  for (int c = 0; c < d; ++c) m.p_star[c] = d1([&](double s) { return Fs(zero, c, s); }, hx);

  // A = F_aaaa / 24
  {
    auto f = [&](double a) { return Fs(unit(n, 0, a), -1, 0.0); };
    const double d4 = (-f(3 * ha) + 12 * f(2 * ha) - 39 * f(ha) + 56 * f(0) - 39 * f(-ha) + 12 * f(-2 * ha) -
                       f(-3 * ha)) /
                      (6 * std::pow(ha, 4));
    m.A = d4 / 24.0;
  }
  m.B = Vec::Zero(k);
  m.C = Mat::Zero(k, k);
  m.gamma = Mat::Zero(k, d + 1);
  auto at = [&](double a, int i, double bi, int j, double bj) {
    Vec xi = Vec::Zero(n);
    xi[0] = a;
    if (i >= 0) xi[1 + i] += bi;
    if (j >= 0) xi[1 + j] += bj;
    return Fs(xi, -1, 0.0);
  };
  for (int i = 0; i < k; ++i) {
    // B_i = F_{a a b_i} / 4, C_ij = F_{b_i b_j} / 2
    m.B[i] = d1([&](double b) { return d2([&](double a) { return at(a, i, b, -1, 0.0); }, ha); }, ha) / 4.0;
    for (int j = 0; j < k; ++j)
      m.C(i, j) =
          0.5 * d1([&](double bi) { return d1([&](double bj) { return at(0.0, i, bi, j, bj); }, ha); }, ha);
  }
  m.C = 0.5 * (m.C + m.C.transpose());

  m.alpha.resize(d + 1);
  m.beta.resize(d + 1);
  for (int c = 0; c <= d; ++c) {
    auto Fa = [&](double s) { return d1([&](double a) { return Fs(unit(n, 0, a), c, s); }, ha); };
    auto Faa = [&](double s) { return d2([&](double a) { return Fs(unit(n, 0, a), c, s); }, ha); };
    m.alpha[c] = d1(Fa, hx);
    m.beta[c] = 0.5 * d1(Faa, hx);
    for (int i = 0; i < k; ++i) {
      auto Fb = [&](double s) { return d1([&](double b) { return Fs(unit(n, 1 + i, b), c, s); }, ha); };
      m.gamma(i, c) = d1(Fb, hx);
    }
  }
  validate(m);
  return m;
}

}  // namespace adhesion
