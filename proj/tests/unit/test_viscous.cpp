#include "adhesion/limit_potential.hpp"
#include "adhesion/viscous_oracle.hpp"

#include "../oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace adhesion;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Cole-Hopf solution matches a finite-difference solver") {
  const FourierSeries phi0 = FourierSeries::cosine(1);
  const ViscousSolution s(phi0, 0.1);
  const int n = 512;
  const auto fd = oracle::viscous_fd([](double x) { return std::cos(x); }, 2.0 * kPi, 0.1, 0.5, n);
  double worst = 0.0;
  for (int i = 0; i < n; i += 8) worst = std::max(worst, std::abs(s.psi(2.0 * kPi * i / n, 0.5) - fd[static_cast<std::size_t>(i)]));
  CHECK(worst < 1e-3);
}

TEST_CASE("the viscous potential starts at the initial potential") {
  const ViscousSolution s(FourierSeries::cosine(1), 0.05);
  for (double x : {0.0, 1.0, 2.5}) CHECK(s.psi(x, 1e-7) == doctest::Approx(std::cos(x)).epsilon(1e-5));
}

TEST_CASE("velocity is the spatial derivative of psi") {
  const ViscousSolution s(FourierSeries::cosine(1), 0.02);
  const double h = 1e-5;
  for (double x : {-0.3, 0.2, 1.4})
    for (double t : {0.5, 2.0})
      CHECK(s.velocity(x, t) == doctest::Approx((s.psi(x + h, t) - s.psi(x - h, t)) / (2 * h)).epsilon(1e-5));
}

TEST_CASE("vanishing viscosity approaches the Hopf-Lax potential") {
  const FourierSeries phi0 = FourierSeries::cosine(1);
  const HopfLaxPotential hl(phi0);
  double previous = 1e9;
  for (double nu : {0.1, 0.03, 0.01}) {
    const ViscousSolution s(phi0, nu);
    double sup = 0.0, mean = 0.0;
    std::vector<double> d;
    for (int i = 0; i < 64; ++i) {
      const double x = 2.0 * kPi * i / 64;
      d.push_back(s.psi(x, 2.0) - hl.evaluate(make_vec({x}), 2.0));
      mean += d.back() / 64;
    }
    for (double v : d) sup = std::max(sup, std::abs(v - mean));
    CHECK(sup < previous);
    previous = sup;
  }
}

TEST_CASE("viscous trajectories converge onto the stationary shock") {
  const ViscousSolution s(FourierSeries::cosine(1), 0.01);
  const auto line = viscous_trajectory(s, kPi / 2, 3.0, 1e-3);
  CHECK(std::abs(line.back().x) < 1e-3);
}

TEST_CASE("second difference scan of a known quadratic") {
  auto f = [](double x, double) { return 0.5 * x * x; };
  const auto r = second_difference_scan(f, 1.0, 1.0, 8, 1e-3, 500, 1, 1.0, 1e-2);
  CHECK(r.max_second_difference == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(!r.violated);
  auto g = [](double x, double t) { return x * x + t; };
  CHECK(second_difference_scan(g, 1.0, 1.0, 8, 1e-3, 500, 1, 1.0, 1e-2).violated);
}

TEST_CASE("initial space-time curvature of the cosine benchmark") {
  // psi_QQ at t = 0 from psi_t = -psi_x^2/2: max of -cos x (1 + sin^2 x)
  CHECK(initial_spacetime_curvature(FourierSeries::cosine(1), 0.0) ==
        doctest::Approx(4.0 * std::sqrt(6.0) / 9.0).epsilon(1e-6));
}
