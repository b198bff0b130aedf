#include "adhesion/fourier_series.hpp"

#include "adhesion/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace adhesion {

FourierSeries::FourierSeries(Vec period, std::vector<FourierMode> modes)
    : period_(std::move(period)), modes_(std::move(modes)) {
  const auto d = period_.size();
  if (d < 1 || d > 2) throw UnsupportedDimension("periodic potentials are supported for d = 1, 2");
  for (Eigen::Index i = 0; i < d; ++i)
    if (!(period_[i] > 0.0) || !std::isfinite(period_[i]))
      throw DomainError("period must be positive and finite");
  for (const auto& m : modes_) {
    if (static_cast<Eigen::Index>(m.k.size()) != d)
      throw DimensionMismatch("wave number dimension differs from the period dimension");
    if (!std::isfinite(m.cos_amp) || !std::isfinite(m.sin_amp))
      throw DomainError("mode amplitudes must be finite");
  }
}

FourierSeries FourierSeries::from_complex(Vec period, const std::vector<ComplexCoefficient>& coefficients) {
  std::map<std::vector<int>, std::pair<double, double>> table;
  for (const auto& c : coefficients) {
    auto& slot = table[c.k];
    slot.first += c.re;
    slot.second += c.im;
  }
  std::vector<FourierMode> modes;
  for (const auto& [k, c] : table) {
    std::vector<int> minus(k.size());
    bool is_zero = true;
    for (std::size_t i = 0; i < k.size(); ++i) {
      minus[i] = -k[i];
      is_zero = is_zero && k[i] == 0;
    }
    if (is_zero) {
      if (std::abs(c.second) > 1e-12) throw InvalidPotential("mean coefficient must be real");
      modes.push_back({k, c.first, 0.0});
      continue;
    }
    auto it = table.find(minus);
    const std::pair<double, double> partner = it == table.end() ? std::pair{0.0, 0.0} : it->second;
    if (std::abs(partner.first - c.first) > 1e-12 || std::abs(partner.second + c.second) > 1e-12)
      throw InvalidPotential("coefficients are not conjugate-symmetric; the function would be complex");
    if (k < minus) continue;  // each pair once
    // c e^{i th} + conj(c) e^{-i th} = 2 re cos th - 2 im sin th
    modes.push_back({k, 2.0 * c.first, -2.0 * c.second});
  }
  return FourierSeries(std::move(period), std::move(modes));
}

FourierSeries FourierSeries::cosine(int dimension) {
  Vec period = Vec::Constant(dimension, 2.0 * std::numbers::pi);
  std::vector<FourierMode> modes;
  for (int i = 0; i < dimension; ++i) {
    std::vector<int> k(static_cast<std::size_t>(dimension), 0);
    k[static_cast<std::size_t>(i)] = 1;
    modes.push_back({k, 1.0, 0.0});
  }
  return FourierSeries(period, modes);
}

FourierSeries FourierSeries::zero(int dimension, double period) {
  return FourierSeries(Vec::Constant(dimension, period), {});
}

Vec FourierSeries::wave_vector(const FourierMode& m) const {
  Vec w(period_.size());
  for (Eigen::Index i = 0; i < period_.size(); ++i)
    w[i] = 2.0 * std::numbers::pi * m.k[static_cast<std::size_t>(i)] / period_[i];
  return w;
}

double FourierSeries::phase(const FourierMode& m, const Vec& x) const {
  return wave_vector(m).dot(x);
}

double FourierSeries::value(const Vec& x) const {
  if (x.size() != period_.size()) throw DimensionMismatch("point dimension mismatch");
  double s = 0.0;
  for (const auto& m : modes_) {
    const double th = phase(m, x);
    s += m.cos_amp * std::cos(th) + m.sin_amp * std::sin(th);
  }
  return s;
}

Vec FourierSeries::gradient(const Vec& x) const {
  if (x.size() != period_.size()) throw DimensionMismatch("point dimension mismatch");
  Vec g = Vec::Zero(x.size());
  for (const auto& m : modes_) {
    const Vec w = wave_vector(m);
    const double th = w.dot(x);
    g += (-m.cos_amp * std::sin(th) + m.sin_amp * std::cos(th)) * w;
  }
  return g;
}

Mat FourierSeries::hessian(const Vec& x) const {
  if (x.size() != period_.size()) throw DimensionMismatch("point dimension mismatch");
  Mat h = Mat::Zero(x.size(), x.size());
  for (const auto& m : modes_) {
    const Vec w = wave_vector(m);
    const double th = w.dot(x);
    h -= (m.cos_amp * std::cos(th) + m.sin_amp * std::sin(th)) * (w * w.transpose());
  }
  return h;
}

double FourierSeries::third_derivative(double x) const {
  if (dimension() != 1) throw DimensionMismatch("third derivative is defined for d = 1");
  double s = 0.0;
  for (const auto& m : modes_) {
    const double w = 2.0 * std::numbers::pi * m.k[0] / period_[0];
    const double th = w * x;
    s += w * w * w * (m.cos_amp * std::sin(th) - m.sin_amp * std::cos(th));
  }
  return s;
}

double FourierSeries::fourth_derivative(double x) const {
  if (dimension() != 1) throw DimensionMismatch("fourth derivative is defined for d = 1");
  double s = 0.0;
  for (const auto& m : modes_) {
    const double w = 2.0 * std::numbers::pi * m.k[0] / period_[0];
    const double th = w * x;
    s += w * w * w * w * (m.cos_amp * std::cos(th) + m.sin_amp * std::sin(th));
  }
  return s;
}

double FourierSeries::mean() const {
  double s = 0.0;
  for (const auto& m : modes_) {
    bool zero = true;
    for (int k : m.k) zero = zero && k == 0;
    if (zero) s += m.cos_amp;
  }
  return s;
}

double FourierSeries::amplitude_bound() const {
  double s = 0.0;
  for (const auto& m : modes_) {
    bool zero = true;
    for (int k : m.k) zero = zero && k == 0;
    if (!zero) s += std::hypot(m.cos_amp, m.sin_amp);
  }
  return s;
}

double FourierSeries::gradient_bound() const {
  double s = 0.0;
  for (const auto& m : modes_) s += std::hypot(m.cos_amp, m.sin_amp) * wave_vector(m).norm();
  return s;
}

double FourierSeries::curvature_bound() const {
  double s = 0.0;
  for (const auto& m : modes_) s += std::hypot(m.cos_amp, m.sin_amp) * wave_vector(m).squaredNorm();
  return s;
}

}  // namespace adhesion
