#pragma once

#include <Eigen/Dense>

#include <initializer_list>

namespace adhesion {

// Points, directions and momenta share one representation; the role is
// carried by the name at the use site. Dimensions are small (1..4).
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

}  // namespace adhesion
