#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace adhesion {

template <class Fn>
SemiconcavityReport second_difference_scan(const Fn& f, double period, double T, int directions, double delta,
                                           int samples, std::uint64_t seed, double bound, double tol) {
  SemiconcavityReport r;
  r.bound = bound;
  r.max_second_difference = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, period);
  std::uniform_real_distribution<double> ut(delta, T);
  for (int i = 0; i < samples; ++i) {
    const double x = ux(rng);
    const double t = ut(rng);
    const double centre = f(x, t);
    for (int k = 0; k < directions; ++k) {
      const double th = k * std::numbers::pi / directions;
      const double qx = std::cos(th) * delta, qt = std::sin(th) * delta;
      const double q = (f(x + qx, t + qt) - 2.0 * centre + f(x - qx, t - qt)) / (delta * delta);
      if (q > r.max_second_difference) {
        r.max_second_difference = q;
        r.at_x = x;
        r.at_t = t;
        r.direction = th;
      }
    }
  }
  r.violated = r.max_second_difference > bound + tol;
  return r;
}

}  // namespace adhesion
