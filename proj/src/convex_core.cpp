#include "adhesion/convex_core.hpp"

#include "adhesion/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace adhesion {

MomentumSet::MomentumSet(std::vector<Momentum> elements) {
  if (elements.empty()) throw InvalidPotential("momentum set must be nonempty");
  dimension_ = static_cast<int>(elements.front().size());
  if (dimension_ < 1) throw DimensionMismatch("momenta must have dimension >= 1");
  elements_.reserve(elements.size());
  for (auto& p : elements) {
    if (p.size() != dimension_)
      throw DimensionMismatch(fmt::format("momentum of dimension {} in a set of dimension {}",
                                          p.size(), dimension_));
    if (!all_finite(p)) throw DomainError("momentum components must be finite");
    const bool seen = std::any_of(elements_.begin(), elements_.end(),
                                  [&](const Momentum& q) { return q == p; });
    if (!seen) elements_.push_back(std::move(p));
  }
}

double MomentumSet::coordinate_scale() const {
  double s = 0.0;
  for (const auto& p : elements_) s = std::max(s, p.cwiseAbs().maxCoeff());
  return std::max(s, 1e-300);
}

namespace {

double containment_tolerance(const MomentumSet& set) {
  return kBallTieTolerance * std::max(1.0, set.coordinate_scale());
}

// Ball whose boundary passes through all given points and whose centre lies
// in their affine hull. Empty optional when the points are affinely dependent.
std::optional<Ball> circumscribed_ball(const std::vector<const Momentum*>& pts) {
  const Momentum& p0 = *pts.front();
  if (pts.size() == 1) return Ball{p0, 0.0};
  const auto k = static_cast<Eigen::Index>(pts.size() - 1);
  Mat edges(p0.size(), k);
  Vec rhs(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    edges.col(j) = *pts[static_cast<std::size_t>(j + 1)] - p0;
    rhs[j] = 0.5 * edges.col(j).squaredNorm();
  }
  Eigen::ColPivHouseholderQR<Mat> qr(edges);
  qr.setThreshold(kDegeneracyTolerance);
  if (qr.rank() < k) return std::nullopt;
  const Mat gram = edges.transpose() * edges;
  const Vec lambda = gram.ldlt().solve(rhs);
  Ball ball;
  ball.center = p0 + edges * lambda;
  ball.radius = 0.0;
  for (const auto* p : pts) ball.radius = std::max(ball.radius, (*p - ball.center).norm());
  return ball;
}

bool contains(const Ball& ball, const Momentum& p, double tol) {
  return (p - ball.center).norm() <= ball.radius + tol;
}

void check_dimension(const MomentumSet& set) {
  if (set.dimension() > 3)
    throw UnsupportedDimension(
        fmt::format("minimal enclosing ball supports dimension <= 3, got {}", set.dimension()));
}

// Smallest feasible circumscribed ball over all subsets of `pts` with at
// most max_support elements.
Ball exhaustive_search(const std::vector<const Momentum*>& pts, std::size_t max_support,
                       double tol) {
  const std::size_t n = pts.size();
  std::optional<Ball> best;
  std::vector<std::size_t> idx;
  std::vector<const Momentum*> subset;
  for (std::size_t size = 1; size <= std::min(n, max_support); ++size) {
    idx.resize(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      subset.clear();
      for (auto i : idx) subset.push_back(pts[i]);
      if (auto ball = circumscribed_ball(subset)) {
        if (!best || ball->radius < best->radius - tol) {
          const bool feasible = std::all_of(pts.begin(), pts.end(),
                                            [&](const Momentum* p) { return contains(*ball, *p, tol); });
          if (feasible) best = std::move(ball);
        }
      }
      // next combination in lexicographic order
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == n - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return *best;  // a singleton subset of the farthest pair is always feasible eventually
}

constexpr std::size_t kExhaustiveLimit = 40;

}  // namespace

Ball min_enclosing_ball_exhaustive(const MomentumSet& set) {
  check_dimension(set);
  std::vector<const Momentum*> pts;
  for (const auto& p : set) pts.push_back(&p);
  return exhaustive_search(pts, static_cast<std::size_t>(set.dimension()) + 1,
                           containment_tolerance(set));
}

Ball min_enclosing_ball_incremental(const MomentumSet& set) {
  check_dimension(set);
  const double tol = containment_tolerance(set);
  const std::size_t max_support = static_cast<std::size_t>(set.dimension()) + 1;
  std::vector<const Momentum*> pts;
  for (const auto& p : set) pts.push_back(&p);
  std::mt19937_64 rng(0x5eedULL);
  std::shuffle(pts.begin(), pts.end(), rng);

  std::vector<const Momentum*> boundary;
  auto ball_of_boundary = [&]() -> Ball {
    if (boundary.empty()) return Ball{Vec::Zero(set.dimension()), -1.0};
    if (auto b = circumscribed_ball(boundary)) return *b;
    return exhaustive_search(boundary, max_support, tol);
  };
  // Welzl recursion over prefixes pts[0, n) with the current boundary set.
  auto solve = [&](auto&& self, std::size_t n) -> Ball {
    Ball ball = ball_of_boundary();
    if (boundary.size() == max_support) return ball;
    for (std::size_t i = 0; i < n; ++i) {
      if (ball.radius >= 0.0 && contains(ball, *pts[i], tol)) continue;
      boundary.push_back(pts[i]);
      ball = self(self, i);
      boundary.pop_back();
    }
    return ball;
  };
  return solve(solve, pts.size());
}

Ball min_enclosing_ball(const MomentumSet& set) {
  if (set.size() <= kExhaustiveLimit) return min_enclosing_ball_exhaustive(set);
  return min_enclosing_ball_incremental(set);
}

std::vector<std::size_t> ball_support(const MomentumSet& set, const Ball& ball) {
  const double tol = 1e-9 * std::max(1.0, set.coordinate_scale());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < set.size(); ++i)
    if ((set[i] - ball.center).norm() >= ball.radius - tol) out.push_back(i);
  return out;
}

namespace {

void require_planar(const Momentum& p) {
  if (p.size() != 2) throw DimensionMismatch("planar operation needs 2-dimensional points");
}

}  // namespace

bool collinear(const Momentum& p1, const Momentum& p2, const Momentum& p3) {
  require_planar(p1);
  require_planar(p2);
  require_planar(p3);
  const Vec b = p2 - p1;
  const Vec c = p3 - p1;
  const double scale = std::max({b.norm(), c.norm(), (p3 - p2).norm()});
  const double cross = b[0] * c[1] - b[1] * c[0];
  return std::abs(cross) <= kDegeneracyTolerance * scale * scale;
}

Momentum circumcenter(const Momentum& p1, const Momentum& p2, const Momentum& p3) {
  if (collinear(p1, p2, p3))
    throw DegenerateConfiguration("circumcenter of collinear points is undefined");
  const Vec b = p2 - p1;
  const Vec c = p3 - p1;
  const double d = 2.0 * (b[0] * c[1] - b[1] * c[0]);
  const double b2 = b.squaredNorm();
  const double c2 = c.squaredNorm();
  Vec u(2);
  u[0] = (c[1] * b2 - b[1] * c2) / d;
  u[1] = (b[0] * c2 - c[0] * b2) / d;
  return p1 + u;
}

double directional_min(const MomentumSet& set, const Vec& direction) {
  if (direction.size() != set.dimension())
    throw DimensionMismatch("direction and momentum set dimensions differ");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set) best = std::min(best, p.dot(direction));
  return best;
}

double spacetime_directional_derivative(const MomentumSet& set, double u_star,
                                        const Vec& direction, double tau) {
  if (direction.size() != set.dimension())
    throw DimensionMismatch("direction and momentum set dimensions differ");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set)
    best = std::min(best, p.dot(direction) - 0.5 * tau * p.squaredNorm() - u_star * tau);
  return best;
}

ExtendedReal legendre_lagrangian(const Vec& direction, double tau) {
  if (tau != 1.0) return ExtendedReal::plus_infinity();
  return ExtendedReal::finite(0.5 * direction.squaredNorm());
}

}  // namespace adhesion
