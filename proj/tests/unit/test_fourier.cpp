#include "adhesion/errors.hpp"
#include "adhesion/fourier_series.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace adhesion;

TEST_CASE("cosine benchmark and its derivatives") {
  const FourierSeries f = FourierSeries::cosine(1);
  for (double x : {0.0, 0.3, 1.7, 4.0}) {
    const Vec X = make_vec({x});
    CHECK(f.value(X) == doctest::Approx(std::cos(x)));
    CHECK(f.gradient(X)[0] == doctest::Approx(-std::sin(x)));
    CHECK(f.hessian(X)(0, 0) == doctest::Approx(-std::cos(x)));
    CHECK(f.third_derivative(x) == doctest::Approx(std::sin(x)));
    CHECK(f.fourth_derivative(x) == doctest::Approx(std::cos(x)));
  }
  CHECK(f.mean() == doctest::Approx(0.0));
  CHECK(f.curvature_bound() == doctest::Approx(1.0));
}

TEST_CASE("complex coefficients must describe a real function") {
  const Vec L = Vec::Constant(1, 2.0 * std::numbers::pi);
  const auto ok = FourierSeries::from_complex(L, {{{1}, 0.5, 0.0}, {{-1}, 0.5, 0.0}});
  CHECK(ok.value(make_vec({0.4})) == doctest::Approx(std::cos(0.4)));
  const auto sine = FourierSeries::from_complex(L, {{{1}, 0.0, -0.5}, {{-1}, 0.0, 0.5}});
  CHECK(sine.value(make_vec({0.4})) == doctest::Approx(std::sin(0.4)));
  CHECK_THROWS(FourierSeries::from_complex(L, {{{1}, 0.5, 0.0}, {{-1}, 0.4, 0.0}}));
}

TEST_CASE("planar series are periodic in both directions") {
  const FourierSeries f(make_vec({2.0, 3.0}), {{{1, 0}, 1.0, 0.0}, {{1, 1}, 0.2, -0.3}});
  const Vec x = make_vec({0.37, -1.2});
  CHECK(f.value(x + make_vec({2.0, 0.0})) == doctest::Approx(f.value(x)));
  CHECK(f.value(x + make_vec({0.0, 3.0})) == doctest::Approx(f.value(x)));
  const double h = 1e-5;
  const Vec g = f.gradient(x);
  for (int i = 0; i < 2; ++i) {
    Vec e = Vec::Zero(2);
    e[i] = h;
    CHECK(g[i] == doctest::Approx((f.value(x + e) - f.value(x - e)) / (2 * h)).epsilon(1e-6));
  }
}
