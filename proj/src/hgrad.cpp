#include "adhesion/hgrad.hpp"

#include "adhesion/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace adhesion {

//================================================
// Hamiltonian
//================================================

Hamiltonian::Hamiltonian(Vec linear_part, Mat quadratic_part)
    : linear_(std::move(linear_part)), quadratic_(std::move(quadratic_part)) {
  const auto m = linear_.size();
  if (m < 1) throw InvalidModel("hamiltonian dimension must be >= 1");
  if (quadratic_.rows() != m || quadratic_.cols() != m)
    throw DimensionMismatch("quadratic part must be m x m");
  const double scale = std::max(1.0, quadratic_.cwiseAbs().maxCoeff());
  if ((quadratic_ - quadratic_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidModel("quadratic part must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(quadratic_);
  const Vec& ev = eig.eigenvalues();
  if (ev.minCoeff() < -1e-12 * scale)
    throw InvalidModel(fmt::format("quadratic part is not positive semidefinite (eigenvalue {})",
                                   ev.minCoeff()));
  std::vector<Eigen::Index> pos, zero;
  for (Eigen::Index i = 0; i < m; ++i) (ev[i] > 1e-12 * scale ? pos : zero).push_back(i);
  range_basis_.resize(m, static_cast<Eigen::Index>(pos.size()));
  range_eigenvalues_.resize(static_cast<Eigen::Index>(pos.size()));
  for (std::size_t j = 0; j < pos.size(); ++j) {
    range_basis_.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(pos[j]);
    range_eigenvalues_[static_cast<Eigen::Index>(j)] = ev[pos[j]];
  }
  null_basis_.resize(m, static_cast<Eigen::Index>(zero.size()));
  for (std::size_t j = 0; j < zero.size(); ++j)
    null_basis_.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(zero[j]);
}

Hamiltonian Hamiltonian::burgers(int space_dim) {
  const int m = space_dim + 1;
  Vec linear = Vec::Zero(m);
  linear[space_dim] = 1.0;
  Mat quad = Mat::Zero(m, m);
  quad.topLeftCorner(space_dim, space_dim).setIdentity();
  return Hamiltonian(linear, quad);
}

double Hamiltonian::value(const Vec& momentum) const {
  return linear_.dot(momentum) + 0.5 * momentum.dot(quadratic_ * momentum);
}

Vec Hamiltonian::differential(const Vec& momentum) const {
  return linear_ + quadratic_ * momentum;
}

ExtendedReal Hamiltonian::lagrangian(const Vec& velocity) const {
  const Vec shifted = velocity - linear_;
  if (null_basis_.cols() > 0) {
    const double off = (null_basis_.transpose() * shifted).norm();
    if (off > 1e-12 * std::max(1.0, shifted.norm())) return ExtendedReal::plus_infinity();
  }
  const Vec z = range_basis_.transpose() * shifted;
  return ExtendedReal::finite(0.5 * (z.array().square() / range_eigenvalues_.array()).sum());
}

//================================================
// Potentials built from quadratic pieces
//================================================

SemiconcavePotential min_of_pieces(std::vector<QuadraticPiece> pieces, double active_tol) {
  if (pieces.empty()) throw InvalidPotential("need at least one piece");
  const auto m = pieces.front().linear.size();
  double curvature = 0.0;
  for (auto& piece : pieces) {
    if (piece.linear.size() != m) throw DimensionMismatch("pieces must share a dimension");
    if (piece.hessian.size() == 0) piece.hessian = Mat::Zero(m, m);
    Eigen::SelfAdjointEigenSolver<Mat> eig(piece.hessian, Eigen::EigenvaluesOnly);
    curvature = std::max(curvature, eig.eigenvalues().maxCoeff());
  }
  auto shared = std::make_shared<const std::vector<QuadraticPiece>>(std::move(pieces));
  auto piece_value = [](const QuadraticPiece& pc, const Vec& X) {
    return pc.constant + pc.linear.dot(X) + 0.5 * X.dot(pc.hessian * X);
  };

  SemiconcavePotential out;
  out.dimension = static_cast<int>(m);
  out.quadratic_bound = curvature * Mat::Identity(m, m);
  out.evaluate = [shared, piece_value](const Vec& X) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pc : *shared) best = std::min(best, piece_value(pc, X));
    return best;
  };
  out.subdifferential = [shared, piece_value, active_tol](const Vec& X) {
    std::vector<double> values;
    values.reserve(shared->size());
    for (const auto& pc : *shared) values.push_back(piece_value(pc, X));
    const double best = *std::min_element(values.begin(), values.end());
    const double tol = active_tol * std::max(1.0, std::abs(best));
    std::vector<Vec> grads;
    for (std::size_t i = 0; i < shared->size(); ++i)
      if (values[i] <= best + tol) grads.push_back((*shared)[i].linear + (*shared)[i].hessian * X);
    return MomentumSet(std::move(grads));
  };
  return out;
}

//================================================
// h-gradient, Hamiltonian form
//================================================

Vec h_gradient(const MomentumSet& generators, const Hamiltonian& hamiltonian) {
  const auto m = static_cast<Eigen::Index>(hamiltonian.dimension());
  if (generators.dimension() != m)
    throw DimensionMismatch("sub-differential and hamiltonian dimensions differ");
  const Vec& L = hamiltonian.linear_part();
  const Mat& M = hamiltonian.quadratic_part();
  const auto& G = generators.elements();
  const std::size_t n = G.size();
  const double scale = std::max(1.0, generators.coordinate_scale());
  const double m_scale = std::max(1.0, M.cwiseAbs().maxCoeff());

  struct Candidate {
    double value;
    Vec velocity;
  };
  std::vector<Candidate> candidates;

  std::vector<std::size_t> idx;
  const std::size_t max_size = std::min<std::size_t>(n, static_cast<std::size_t>(m) + 1);
  for (std::size_t size = 1; size <= max_size; ++size) {
    idx.resize(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      const Vec& base = G[idx[0]];
      std::optional<Vec> point;
      if (size == 1) {
        point = base;
      } else {
        const auto k = static_cast<Eigen::Index>(size - 1);
        Mat E(m, k);
        for (Eigen::Index j = 0; j < k; ++j) E.col(j) = G[idx[static_cast<std::size_t>(j + 1)]] - base;
        Eigen::ColPivHouseholderQR<Mat> qr(E);
        qr.setThreshold(kDegeneracyTolerance);
        if (qr.rank() == k) {
          const Mat H = E.transpose() * M * E;
          Eigen::FullPivLU<Mat> lu(H);
          lu.setThreshold(1e-12 * m_scale * scale * scale);
          if (lu.rank() == k) {
            const Vec lambda = lu.solve(-E.transpose() * (L + M * base));
            const double w0 = 1.0 - lambda.sum();
            if (w0 >= -1e-12 && lambda.minCoeff() >= -1e-12) point = base + E * lambda;
          }
        }
      }
      if (point) candidates.push_back({hamiltonian.value(*point), hamiltonian.differential(*point)});

      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  const double value_tol = 1e-13 * std::max(1.0, std::abs(best->value)) * scale * scale;
  const double velocity_tol = 1e-6 * scale * m_scale;
  for (const auto& c : candidates) {
    if (c.value <= best->value + value_tol && (c.velocity - best->velocity).norm() > velocity_tol)
      throw std::logic_error(
          "h-gradient: minimizers of the hamiltonian map to different velocities");
  }
  return best->velocity;
}

Vec h_gradient(const SemiconcavePotential& potential, const Hamiltonian& hamiltonian, const Vec& X) {
  if (X.size() != potential.dimension) throw DimensionMismatch("point dimension mismatch");
  std::optional<MomentumSet> generators;
  try {
    generators.emplace(potential.subdifferential(X));
  } catch (const InvalidPotential& e) {
    throw InvalidPotential(std::string("empty sub-differential set: ") + e.what());
  }
  return h_gradient(*generators, hamiltonian);
}

//================================================
// h-gradient, Lagrangian form
//================================================

Vec h_gradient_lagrangian(const SemiconcavePotential& potential, const Hamiltonian& hamiltonian,
                          const Vec& X, const GridSpec& grid) {
  if (!(grid.spacing > 0.0)) throw DomainError("grid spacing must be positive");
  const MomentumSet D = potential.subdifferential(X);
  if (D.dimension() != hamiltonian.dimension())
    throw DimensionMismatch("sub-differential and hamiltonian dimensions differ");
  const Vec& L = hamiltonian.linear_part();
  const Mat& V = hamiltonian.range_basis();
  const Vec& lambda = hamiltonian.range_eigenvalues();
  const auto r = V.cols();
  if (r == 0) return L;  // l is finite only at Q = L

  double bound = 0.0;
  for (const auto& P : D) bound = std::max(bound, P.norm());
  const double radius =
      grid.radius > 0.0 ? grid.radius : lambda.maxCoeff() * bound + 4.0 * grid.spacing;

  // Objective in eigen-coordinates z of Q = L + V z: l = sum z_k^2 / (2 lambda_k).
  auto objective = [&](const Vec& z) {
    const Vec Q = L + V * z;
    return 0.5 * (z.array().square() / lambda.array()).sum() - directional_min(D, Q);
  };

  Vec center = Vec::Zero(r);
  double spacing = std::max(grid.spacing, radius / 16.0);
  int half = static_cast<int>(std::ceil(radius / spacing));
  bool first_level = true;
  Vec best_z = center;

  while (true) {
    // Lattice center + spacing * i, i in [-half, half]^r; re-centre while the
    // argmin sits on the window edge.
    for (int walk = 0; walk < 64; ++walk) {
      std::vector<int> i(static_cast<std::size_t>(r), -half);
      double best = std::numeric_limits<double>::infinity();
      std::vector<int> best_i(static_cast<std::size_t>(r), 0);
      Vec z(r);
      while (true) {
        for (Eigen::Index k = 0; k < r; ++k) z[k] = center[k] + spacing * i[static_cast<std::size_t>(k)];
        const double f = objective(z);
        if (f < best) {
          best = f;
          best_i = i;
          best_z = z;
        }
        std::size_t k = 0;
        while (k < i.size() && ++i[k] > half) i[k++] = -half;
        if (k == i.size()) break;
      }
      const bool on_edge = std::any_of(best_i.begin(), best_i.end(),
                                       [&](int v) { return std::abs(v) >= half - 1; });
      if (!on_edge) break;
      if (first_level)
        throw ResolutionError("Lagrangian grid argmin lies on the search boundary; enlarge the radius");
      center = best_z;
    }
    if (spacing <= grid.spacing) break;
    first_level = false;
    center = best_z;
    const double next = std::max(grid.spacing, spacing / 8.0);
    half = static_cast<int>(std::ceil(4.0 * spacing / next));
    // the lattice restriction is not convex: near-flat valleys put the
    // lattice argmin tens of cells away from the coarse estimate
    if (next <= grid.spacing) half = std::max(half, r <= 2 ? 40 : 32);
    spacing = next;
  }
  return L + V * best_z;
}

//================================================
// Flow
//================================================

FlowMap::FlowMap(SemiconcavePotential potential, Hamiltonian hamiltonian, double step)
    : potential_(std::move(potential)), hamiltonian_(std::move(hamiltonian)), step_(step) {
  if (!(step_ > 0.0)) throw DomainError("flow step size must be positive");
  if (potential_.dimension != hamiltonian_.dimension())
    throw DimensionMismatch("potential and hamiltonian dimensions differ");
}

Polyline flow(const FlowMap& map, const Vec& X0, double T) {
  if (!(T >= 0.0)) throw DomainError("flow horizon must be nonnegative");
  const double h = map.step();
  const auto full = static_cast<long>(std::floor(T / h + 1e-9));
  const double rest = T - static_cast<double>(full) * h;
  Polyline out;
  out.reserve(static_cast<std::size_t>(full) + 2);
  out.push_back({0.0, X0});
  Vec X = X0;
  for (long k = 0; k < full; ++k) {
    X += h * h_gradient(map.potential(), map.hamiltonian(), X);
    out.push_back({static_cast<double>(k + 1) * h, X});
  }
  if (rest > 1e-12 * h) {
    X += rest * h_gradient(map.potential(), map.hamiltonian(), X);
    out.push_back({T, X});
  }
  return out;
}

//================================================
// Invariance properties of the flow map
//================================================

double InvarianceReport::max() const {
  return std::max({constant_shift, translation, semigroup, dilation});
}

namespace {

double max_gap(const Polyline& a, const Polyline& b, const Vec& shift = Vec()) {
  const std::size_t n = std::min(a.size(), b.size());
  double gap = a.size() == b.size() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec diff = shift.size() ? Vec(a[i].X + shift - b[i].X) : Vec(a[i].X - b[i].X);
    gap = std::max(gap, diff.cwiseAbs().maxCoeff());
  }
  return gap;
}

}  // namespace

InvarianceReport invariance_suite(const FlowMap& map, const Vec& X0, double T, double lambda,
                                  const Vec& X_shift, double t_shift, double constant) {
  if (lambda < 1.0) throw DomainError("dilation factor must satisfy lambda >= 1");
  const auto& phi = map.potential();
  const double h = map.step();
  const Polyline base = flow(map, X0, T);
  InvarianceReport report;

  {
    SemiconcavePotential shifted = phi;
    shifted.evaluate = [f = phi.evaluate, constant](const Vec& X) { return f(X) + constant; };
    report.constant_shift = max_gap(base, flow(FlowMap(shifted, map.hamiltonian(), h), X0, T));
  }
  {
    SemiconcavePotential moved = phi;
    moved.evaluate = [f = phi.evaluate, X_shift](const Vec& X) { return f(X - X_shift); };
    moved.subdifferential = [d = phi.subdifferential, X_shift](const Vec& X) { return d(X - X_shift); };
    report.translation =
        max_gap(base, flow(FlowMap(moved, map.hamiltonian(), h), X0 + X_shift, T), X_shift);
  }
  {
    const double t2 = std::round(t_shift / h) * h;
    const Polyline whole = flow(map, X0, T + t2);
    const Polyline head = flow(map, X0, t2);
    const Polyline tail = flow(map, head.back().X, T);
    double gap = 0.0;
    const std::size_t offset = head.size() - 1;
    for (std::size_t i = 0; i < tail.size() && i + offset < whole.size(); ++i)
      gap = std::max(gap, (tail[i].X - whole[i + offset].X).cwiseAbs().maxCoeff());
    report.semigroup = gap;
  }
  {
    SemiconcavePotential dilated = phi;
    dilated.evaluate = [f = phi.evaluate, lambda](const Vec& X) { return lambda * f(X / lambda); };
    dilated.subdifferential = [d = phi.subdifferential, lambda](const Vec& X) { return d(X / lambda); };
    dilated.quadratic_bound = phi.quadratic_bound / lambda;
    const Polyline big = flow(FlowMap(dilated, map.hamiltonian(), lambda * h), lambda * X0, lambda * T);
    double gap = big.size() == base.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(big.size(), base.size()); ++i)
      gap = std::max(gap, (big[i].X - lambda * base[i].X).cwiseAbs().maxCoeff());
    report.dilation = gap;
  }
  return report;
}

}  // namespace adhesion
