#include "adhesion/errors.hpp"
#include "adhesion/limit_potential.hpp"
#include "adhesion/potential_model.hpp"

#include "../oracles/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace adhesion;
constexpr double kPi = std::numbers::pi;

TEST_CASE("Hopf-Lax values against brute-force minimization") {
  const HopfLaxPotential hl(FourierSeries::cosine(1));
  auto phi0 = [](double a) { return std::cos(a); };
  for (double t : {0.3, 1.0, 2.0, 3.5})
    for (double x : {0.0, 0.4, 1.9, kPi, 5.0}) {
      const double ref = oracle::hopf_lax_brute(phi0, x, t, 2.0 * kPi);
      CHECK(hl.evaluate(make_vec({x}), t) == doctest::Approx(ref).epsilon(1e-9));
    }
  CHECK(hl.evaluate(make_vec({kPi}), 2.0) == doctest::Approx(-1.0));
}

TEST_CASE("cosine shock sits at the maximum of the initial potential") {
  const HopfLaxPotential hl(FourierSeries::cosine(1));
  const auto shocks = find_shocks_1d(hl, 2.0, -kPi);
  REQUIRE(shocks.size() == 1);
  CHECK(shocks[0] == doctest::Approx(0.0).epsilon(1e-9));
  const PotentialModel pm = hl;
  const auto act = active_momenta(pm, make_vec({0.0}), 2.0, default_tolerance(pm));
  REQUIRE(act.size() == 2);
  CHECK(act[0][0] == doctest::Approx(-act[1][0]));
  // p = -sin a with a - 2 sin a = 0
  double a = 1.9;
  for (int i = 0; i < 50; ++i) a -= (a - 2.0 * std::sin(a)) / (1.0 - 2.0 * std::cos(a));
  CHECK(std::abs(act[0][0]) == doctest::Approx(std::sin(a)).epsilon(1e-6));
  CHECK(limit_velocity(pm, make_vec({0.0}), 2.0, default_tolerance(pm))[0] == doctest::Approx(0.0));
}

TEST_CASE("before the first shock every point has one branch") {
  const HopfLaxPotential hl(FourierSeries::cosine(1));
  const PotentialModel pm = hl;
  for (double x = -3.0; x < 3.0; x += 0.25)
    CHECK(active_branches(pm, make_vec({x}), 0.8, default_tolerance(pm)).size() == 1);
}

TEST_CASE("planar Hopf-Lax branches carry (x - a)/t") {
  const FourierSeries f(make_vec({2.0 * kPi, 2.0 * kPi}), {{{1, 0}, 1.0, 0.0}, {{0, 1}, 0.5, 0.0}});
  const HopfLaxPotential hl(f);
  const Vec x = make_vec({0.3, 0.2});
  const auto br = hl.evaluate_branches(x, 0.5);
  REQUIRE(!br.empty());
  CHECK((br[0].momentum - (x - br[0].key) / 0.5).norm() < 1e-8);
  // first-order condition: grad phi0(a) = (x - a)/t
  CHECK((f.gradient(br[0].key) - br[0].momentum).norm() < 1e-6);
}

TEST_CASE("finite families solve the Hamilton-Jacobi equation") {
  const HJBranch b{0.3, make_vec({0.5, -1.0}), 0.7, make_vec({0.1, 0.2})};
  for (double t : {0.0, 0.5, 2.0}) CHECK(std::abs(b.residual(make_vec({0.4, -0.3}), t, 0.25)) < 1e-12);
  const FiniteMinFamily fam({HJBranch{0.0, make_vec({1.0}), 0.0, Vec()}, HJBranch{0.0, make_vec({-0.5}), 0.0, Vec()}});
  // ties on x = t / 4
  const auto br = fam.evaluate_branches(make_vec({0.5}), 2.0);
  REQUIRE(br.size() == 2);
  CHECK(br[0].value == doctest::Approx(br[1].value));
}

TEST_CASE("local linear models") {
  const LocalLinearModel m(MomentumSet{make_vec({1.0, 0.0}), make_vec({-0.5, 0.8}), make_vec({-0.4, -0.9})}, 0.2);
  const Vec q = make_vec({0.3, -0.1});
  const double tau = 0.7;
  double ref = std::numeric_limits<double>::infinity();
  for (const auto& p : m.momenta()) ref = std::min(ref, p.dot(q) - tau * p.squaredNorm() / 2);
  CHECK(m.value(q, tau) == doctest::Approx(ref - 0.2 * tau));
  CHECK(local_model_derivative(m, q, tau) == doctest::Approx(ref - 0.2 * tau));
}

TEST_CASE("planar genericity") {
  CHECK_THROWS_AS(check_planar_genericity(MomentumSet{make_vec({0.0, 0.0}), make_vec({1.0, 1.0}), make_vec({2.0, 2.0})}),
                  GenericityViolation);
  // right angle at the origin
  CHECK_THROWS_AS(check_planar_genericity(MomentumSet{make_vec({0.0, 0.0}), make_vec({1.0, 0.0}), make_vec({0.0, 1.0})}),
                  GenericityViolation);
  // four points on the unit circle
  CHECK_THROWS_AS(check_planar_genericity(MomentumSet{make_vec({1.0, 0.0}), make_vec({0.0, 1.0}), make_vec({-1.0, 0.0}),
                                                      make_vec({0.6, -0.8})}),
                  GenericityViolation);
  CHECK_NOTHROW(check_planar_genericity(MomentumSet{make_vec({1.0, 0.1}), make_vec({-0.3, 0.9}), make_vec({-0.6, -0.7})}));
}
