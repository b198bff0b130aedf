#pragma once

#include "adhesion/extended_real.hpp"
#include "adhesion/types.hpp"

#include <cstddef>
#include <vector>

namespace adhesion {

using Momentum = Vec;

/// Nonempty finite set of momenta of a common dimension. Exact duplicates are
/// dropped on construction (first occurrence kept), so element order is the
/// insertion order of distinct values.
class MomentumSet {
 public:
  explicit MomentumSet(std::vector<Momentum> elements);
  MomentumSet(std::initializer_list<Momentum> elements)
      : MomentumSet(std::vector<Momentum>(elements)) {}

  const std::vector<Momentum>& elements() const { return elements_; }
  const Momentum& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  int dimension() const { return dimension_; }

  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  /// Largest coordinate magnitude, floored at 1e-300. Used to scale tolerances.
  double coordinate_scale() const;

 private:
  std::vector<Momentum> elements_;
  int dimension_ = 0;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Relative tie tolerance for the enclosing-ball search.
inline constexpr double kBallTieTolerance = 1e-12;
/// Relative tolerance (times scale^2) for collinearity/cocircularity tests.
inline constexpr double kDegeneracyTolerance = 1e-10;

/// Smallest ball containing all elements. Exact combinatorial search over
/// support subsets of size <= d+1 for small sets, randomized incremental
/// (move-to-front) for large ones. Dimensions 1..3.
Ball min_enclosing_ball(const MomentumSet& set);

/// Exact search only, regardless of set size.
Ball min_enclosing_ball_exhaustive(const MomentumSet& set);

/// Randomized incremental construction with a fixed shuffle seed.
Ball min_enclosing_ball_incremental(const MomentumSet& set);

/// Indices of elements lying on the boundary of `ball` within the tie
/// tolerance (relative to the set's coordinate scale).
std::vector<std::size_t> ball_support(const MomentumSet& set, const Ball& ball);

/// Centre of the circle through three planar points.
Momentum circumcenter(const Momentum& p1, const Momentum& p2, const Momentum& p3);

/// True when three planar points are collinear under the relative tolerance.
bool collinear(const Momentum& p1, const Momentum& p2, const Momentum& p3);

/// min over p in S of p.q
double directional_min(const MomentumSet& set, const Vec& direction);

/// min over p in S of (p.q - tau |p|^2/2 - u_star tau)
double spacetime_directional_derivative(const MomentumSet& set, double u_star,
                                        const Vec& direction, double tau);

/// Legendre transform of h(p, sigma) = |p|^2/2 + sigma: |q|^2/2 at tau == 1,
/// +infinity otherwise.
ExtendedReal legendre_lagrangian(const Vec& direction, double tau);

}  // namespace adhesion
