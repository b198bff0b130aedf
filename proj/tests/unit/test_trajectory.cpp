#include "adhesion/trajectory.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace adhesion;

TEST_CASE("particles follow characteristics until they hit the shock, then stick") {
  const PotentialModel pm = HopfLaxPotential(FourierSeries::cosine(1));
  const double a = 0.5;
  const auto tr = integrate(pm, make_vec({a}), 0.0, 2.0, 1e-3);
  for (std::size_t k = 0; k < tr.size(); ++k) {
    const double t = tr.times[k];
    if (t < 1.0) CHECK(tr.positions[k][0] == doctest::Approx(a - t * std::sin(a)).epsilon(1e-9));
    if (t > 1.1) {
      CHECK(std::abs(tr.positions[k][0]) < 1e-9);
      CHECK(tr.active_counts[k] == 2);
    }
  }
  CHECK(tr.merge_flags.back());
}

TEST_CASE("a flat initial potential leaves particles at rest") {
  const PotentialModel pm = HopfLaxPotential(FourierSeries::zero(1, 2.0 * std::numbers::pi));
  const auto tr = integrate(pm, make_vec({1.3}), 0.0, 1.0, 1e-2);
  for (const auto& x : tr.positions) CHECK(std::abs(x[0] - 1.3) < 1e-12);
}

TEST_CASE("particles on both sides of a moving shock merge on the bisector") {
  const PotentialModel pm = FiniteMinFamily({HJBranch{0.0, make_vec({1.0}), 0.0, Vec()},
                                             HJBranch{0.0, make_vec({-0.5}), 0.0, Vec()}});
  const auto left = integrate(pm, make_vec({-1.0}), 0.0, 3.0, 1e-3);
  const auto right = integrate(pm, make_vec({2.0}), 0.0, 3.0, 1e-3);
  CHECK(left.positions.back()[0] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(right.positions.back()[0] == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(left.velocities.back()[0] == doctest::Approx(0.25));
  const auto u = forward_uniqueness_check(pm, make_vec({-1.0}), make_vec({2.0}), 0.0, 3.0, 1e-3);
  CHECK(u.met);
  CHECK(u.pass);
  CHECK(u.meet_time == doctest::Approx(8.0 / 3.0).epsilon(3e-3));
}

TEST_CASE("identical starts never separate") {
  const PotentialModel pm = HopfLaxPotential(FourierSeries::cosine(1));
  const auto u = forward_uniqueness_check(pm, make_vec({2.0}), make_vec({2.0}), 0.0, 1.5, 1e-3);
  CHECK(u.met);
  CHECK(u.meet_time == 0.0);
  CHECK(u.post_meet_gap == 0.0);
}

TEST_CASE("backward reachability: one preimage off the shock, an interval on it") {
  const PotentialModel pm = HopfLaxPotential(FourierSeries::cosine(1));
  const auto off = backward_reachability(pm, make_vec({2.0}), 1.5, 32, 0.0, 5e-3, 3.0);
  REQUIRE(off.preimages.size() == 1);
  const double a = off.preimages[0][0];
  CHECK(a - 1.5 * std::sin(a) == doctest::Approx(2.0).epsilon(1e-6));
  const auto on = backward_reachability(pm, make_vec({0.0}), 1.5, 32, 0.0, 5e-3, 3.0);
  REQUIRE(on.preimages.size() == 2);
  CHECK(on.preimages[0][0] == doctest::Approx(-on.preimages[1][0]).epsilon(1e-9));
}
