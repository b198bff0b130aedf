#include "adhesion/convex_core.hpp"
#include "adhesion/errors.hpp"

#include "../oracles/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace adhesion;

TEST_CASE("enclosing ball of a symmetric pair") {
  const Ball b = min_enclosing_ball(MomentumSet{make_vec({1.0}), make_vec({-1.0})});
  CHECK(b.center[0] == doctest::Approx(0.0));
  CHECK(b.radius == doctest::Approx(1.0));
}

TEST_CASE("acute triangle: circumcentre; obtuse triangle: longest side midpoint") {
  const Vec a = make_vec({0.0, 0.0}), b = make_vec({2.0, 0.0}), c = make_vec({1.0, 1.5});
  const Ball acute = min_enclosing_ball(MomentumSet{a, b, c});
  CHECK((acute.center - circumcenter(a, b, c)).norm() < 1e-12);
  CHECK(ball_support(MomentumSet{a, b, c}, acute).size() == 3);

  const Vec d = make_vec({1.0, 0.2});
  const Ball obtuse = min_enclosing_ball(MomentumSet{a, b, d});
  CHECK((obtuse.center - make_vec({1.0, 0.0})).norm() < 1e-12);
  CHECK(ball_support(MomentumSet{a, b, d}, obtuse).size() == 2);
}

TEST_CASE("enclosing ball matches the pair/triple brute force") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 9;
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back(make_vec({u(rng), u(rng)}));
    const Ball b = min_enclosing_ball(MomentumSet(pts));
    const auto ref = oracle::enclosing_ball_brute(pts);
    CHECK(b.radius == doctest::Approx(ref.radius).epsilon(1e-10));
    CHECK((b.center - ref.center).norm() < 1e-9);
  }
}

TEST_CASE("exhaustive and incremental searches agree") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int d = 1; d <= 3; ++d)
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Vec> pts;
      for (int i = 0; i < 30; ++i) {
        Vec p(d);
        for (int k = 0; k < d; ++k) p[k] = g(rng);
        pts.push_back(p);
      }
      const MomentumSet set(pts);
      const Ball a = min_enclosing_ball_exhaustive(set);
      const Ball b = min_enclosing_ball_incremental(set);
      CHECK(a.radius == doctest::Approx(b.radius).epsilon(1e-10));
      CHECK((a.center - b.center).norm() < 1e-8);
      for (const auto& p : set) CHECK((p - a.center).norm() <= a.radius * (1 + 1e-10) + 1e-12);
    }
}

TEST_CASE("large sets use the incremental path and stay enclosing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(make_vec({u(rng), u(rng), u(rng)}));
  const MomentumSet set(pts);
  const Ball b = min_enclosing_ball(set);
  for (const auto& p : set) CHECK((p - b.center).norm() <= b.radius + 1e-10);
  CHECK(ball_support(set, b).size() >= 2);
}

TEST_CASE("momentum set validation") {
  CHECK_THROWS_AS(MomentumSet(std::vector<Vec>{}), InvalidPotential);
  CHECK_THROWS_AS((MomentumSet{make_vec({1.0}), make_vec({1.0, 2.0})}), DimensionMismatch);
  const MomentumSet dup{make_vec({1.0, 0.0}), make_vec({1.0, 0.0}), make_vec({0.0, 1.0})};
  CHECK(dup.size() == 2);
  CHECK_THROWS_AS(min_enclosing_ball(MomentumSet{Vec::Zero(4), Vec::Ones(4)}), UnsupportedDimension);
  CHECK_THROWS_AS(circumcenter(make_vec({0.0, 0.0}), make_vec({1.0, 1.0}), make_vec({2.0, 2.0})),
                  DegenerateConfiguration);
}

TEST_CASE("directional derivatives") {
  const MomentumSet s{make_vec({1.0, 0.0}), make_vec({-1.0, 0.5})};
  CHECK(directional_min(s, make_vec({1.0, 1.0})) == doctest::Approx(-0.5));
  // min_i p_i.q - tau |p_i|^2/2 - u tau
  CHECK(spacetime_directional_derivative(s, 0.25, make_vec({1.0, 0.0}), 2.0) ==
        doctest::Approx(std::min(1.0 - 1.0, -1.0 - 1.25) - 0.5));
}

TEST_CASE("Legendre transform of the Burgers Hamiltonian") {
  CHECK(legendre_lagrangian(make_vec({3.0, 4.0}), 1.0).value() == doctest::Approx(12.5));
  CHECK(legendre_lagrangian(make_vec({3.0, 4.0}), 0.5).is_infinite());
}
