#pragma once

#include "adhesion/types.hpp"

#include <vector>

namespace adhesion {

/// One real mode: cos_amp * cos(theta) + sin_amp * sin(theta) with
/// theta = sum_i 2 pi k_i x_i / period_i.
struct FourierMode {
  std::vector<int> k;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

/// Complex coefficient c_k of exp(i theta_k).
struct ComplexCoefficient {
  std::vector<int> k;
  double re = 0.0;
  double im = 0.0;
};

/// Smooth periodic function on R^d (d = 1, 2) given by finitely many modes.
class FourierSeries {
 public:
  FourierSeries(Vec period, std::vector<FourierMode> modes);

  /// Requires c_{-k} = conj(c_k) within 1e-12 (real-valued function).
  static FourierSeries from_complex(Vec period, const std::vector<ComplexCoefficient>& coefficients);
  /// cos x on a 2 pi period.
  static FourierSeries cosine(int dimension = 1);
  static FourierSeries zero(int dimension, double period);

  int dimension() const { return static_cast<int>(period_.size()); }
  const Vec& period() const { return period_; }
  const std::vector<FourierMode>& modes() const { return modes_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  /// Third derivative along the first axis (d = 1 only; used by the
  /// space-time Hessian at t = 0).
  double third_derivative(double x) const;
  double fourth_derivative(double x) const;

  /// Mean over a period (the k = 0 cosine amplitude).
  double mean() const;
  /// Sum of mode magnitudes; bounds |f - mean|.
  double amplitude_bound() const;
  /// Bound on |grad f| from the mode magnitudes.
  double gradient_bound() const;
  /// Largest Hessian eigenvalue bound from the mode magnitudes.
  double curvature_bound() const;

 private:
  double phase(const FourierMode& m, const Vec& x) const;
  Vec wave_vector(const FourierMode& m) const;

  Vec period_;
  std::vector<FourierMode> modes_;
};

}  // namespace adhesion
