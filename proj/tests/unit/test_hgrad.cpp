#include "adhesion/errors.hpp"
#include "adhesion/hgrad.hpp"

#include "../oracles/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace adhesion;

TEST_CASE("smooth potentials: the h-gradient is (grad phi, 1)") {
  const auto pot = min_of_pieces({QuadraticPiece{0.0, make_vec({0.3, -0.2}), Mat::Identity(2, 2)}});
  const Vec X = make_vec({0.5, 0.1});
  const Vec g = h_gradient(pot, Hamiltonian::burgers(1), X);
  CHECK(g[0] == doctest::Approx(0.8));
  CHECK(g[1] == doctest::Approx(1.0));
}

TEST_CASE("symmetric momenta give zero spatial velocity") {
  const MomentumSet D{make_vec({1.0, -0.5}), make_vec({-1.0, -0.5})};
  const Vec g = h_gradient(D, Hamiltonian::burgers(1));
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(1.0));
}

TEST_CASE("on the paraboloid the Burgers h-gradient is the enclosing ball centre") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vec> full, spatial;
    for (int i = 0; i < 4; ++i) {
      const Vec p = make_vec({u(rng), u(rng)});
      full.push_back(make_vec({p[0], p[1], -0.5 * p.squaredNorm()}));
      spatial.push_back(p);
    }
    const Vec g = h_gradient(MomentumSet(full), Hamiltonian::burgers(2));
    const auto ref = oracle::enclosing_ball_brute(spatial);
    CHECK((g.head(2) - ref.center).norm() < 1e-9);
    CHECK(g[2] == doctest::Approx(1.0));
  }
}

TEST_CASE("Lagrangian grid form on small examples") {
  const Hamiltonian h = Hamiltonian::burgers(2);
  const auto single = min_of_pieces({QuadraticPiece{0.0, make_vec({0.3, -0.4, 0.0}), Mat()}});
  const Vec g = h_gradient_lagrangian(single, h, Vec::Zero(3), GridSpec{1e-3, 0.0});
  CHECK((g.head(2) - make_vec({0.3, -0.4})).cwiseAbs().maxCoeff() <= 0.5e-3 + 1e-12);
  CHECK(g[2] == doctest::Approx(1.0));
  const auto pair = min_of_pieces({QuadraticPiece{0.0, make_vec({0.0, 0.0, 0.0}), Mat()},
                                   QuadraticPiece{0.0, make_vec({2.0, 0.0, -2.0}), Mat()}});
  const Vec m = h_gradient_lagrangian(pair, h, Vec::Zero(3), GridSpec{1e-3, 0.0});
  CHECK((m.head(2) - make_vec({1.0, 0.0})).cwiseAbs().maxCoeff() <= 0.5e-3 + 1e-12);
}

TEST_CASE("the Lagrangian form never beats the Hamiltonian form on its own objective") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Hamiltonian h(make_vec({0.1, -0.2}), (Mat(2, 2) << 1.5, 0.3, 0.3, 0.8).finished());
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<QuadraticPiece> pieces;
    for (int i = 0; i < 3; ++i) pieces.push_back({0.0, make_vec({u(rng), u(rng)}), Mat()});
    const auto pot = min_of_pieces(pieces);
    const Vec X = Vec::Zero(2);
    const MomentumSet D = pot.subdifferential(X);
    auto f = [&](const Vec& Q) { return h.lagrangian(Q).value() - directional_min(D, Q); };
    const Vec a = h_gradient(pot, h, X);
    const Vec b = h_gradient_lagrangian(pot, h, X, GridSpec{1e-3, 0.0});
    CHECK(f(a) <= f(b) + 1e-12);
  }
}

TEST_CASE("a search radius too small to bracket the minimizer is reported") {
  const auto far = min_of_pieces({QuadraticPiece{0.0, make_vec({5.0, 0.0}), Mat()}});
  CHECK_THROWS_AS(h_gradient_lagrangian(far, Hamiltonian::burgers(1), Vec::Zero(2), GridSpec{1e-2, 0.5}),
                  ResolutionError);
}

TEST_CASE("concave homogeneous potentials flow along straight lines") {
  const auto pot = min_of_pieces({QuadraticPiece{0.0, make_vec({1.0, 0.0, -0.5}), Mat()},
                                  QuadraticPiece{0.0, make_vec({-0.5, 0.8, -0.445}), Mat()},
                                  QuadraticPiece{0.0, make_vec({-0.4, -0.9, -0.485}), Mat()}});
  const Hamiltonian h = Hamiltonian::burgers(2);
  const Vec g = h_gradient(pot, h, Vec::Zero(3));
  for (const auto& s : flow(FlowMap(pot, h, 1e-3), Vec::Zero(3), 1.0)) CHECK((s.X - s.t * g).norm() < 1e-2);
}

TEST_CASE("flow takes a shortened last step") {
  const auto pot = min_of_pieces({QuadraticPiece{0.0, make_vec({0.5, 0.0}), Mat()}});
  const auto line = flow(FlowMap(pot, Hamiltonian::burgers(1), 0.3), Vec::Zero(2), 1.0);
  CHECK(line.back().t == doctest::Approx(1.0));
  CHECK(line.back().X[0] == doctest::Approx(0.5));
}

TEST_CASE("invariances of the flow") {
  const auto pot = min_of_pieces({QuadraticPiece{0.1, make_vec({0.3, -0.2}), Mat::Identity(2, 2) * 0.5}});
  const auto r = invariance_suite(FlowMap(pot, Hamiltonian::burgers(1), 1e-4), make_vec({0.2, 0.1}), 0.2, 2.0,
                                  make_vec({0.125, 0.125}), 0.05, 5.0);
  CHECK(r.constant_shift == 0.0);
  CHECK(r.max() <= 1e-8);
  CHECK_THROWS_AS(invariance_suite(FlowMap(pot, Hamiltonian::burgers(1), 1e-3), make_vec({0.2, 0.1}), 0.1, 0.5,
                                   make_vec({0.0, 0.0}), 0.0, 0.0),
                  DomainError);
}
