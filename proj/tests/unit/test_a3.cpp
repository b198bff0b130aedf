#include "adhesion/a3_endpoint.hpp"
#include "adhesion/errors.hpp"
#include "adhesion/trajectory.hpp"

#include <doctest.h>

using namespace adhesion;

namespace {

A3EndpointModel example() {
  A3EndpointModel m;
  m.A = 1.0;
  m.B = make_vec({0.0});
  m.C = Mat::Identity(1, 1);
  m.alpha = make_vec({1.0, 0.0, 0.0});
  m.beta = make_vec({0.0, 0.0, -1.0});
  m.gamma = (Mat(1, 3) << 0.0, 1.0, 0.0).finished();
  m.p_star = Vec::Zero(2);
  return m;
}

}  // namespace

TEST_CASE("the model end point is tangent to the shock") {
  const auto r = a3_tangent_check(example());
  CHECK(r.ok);
  CHECK(r.alpha_value == doctest::Approx(0.0));
  CHECK(r.beta_value == doctest::Approx(-1.0));
  A3EndpointModel flipped = example();
  flipped.beta = -flipped.beta;
  const auto f = a3_tangent_check(flipped);
  CHECK(!f.ok);
  CHECK(f.diagnostic.find("beta") != std::string::npos);
}

TEST_CASE("two competing branches inside the half-plane, one outside") {
  const auto m = example();
  CHECK(a3_branches(m, make_vec({0.0, 0.0}), 0.5).size() == 2);
  CHECK(a3_branches(m, make_vec({0.0, 0.0}), -0.5).size() == 1);
  const auto hp = a3_shock_halfplane(m);
  CHECK(hp.contains(make_vec({0.0, 0.3}), 0.5));
  CHECK(!hp.contains(make_vec({0.1, 0.3}), 0.5));
  CHECK(!hp.contains(make_vec({0.0, 0.3}), -0.5));
}

TEST_CASE("the trajectory from the end point stays on the shock") {
  const PotentialModel pm = example();
  const auto tr = integrate(pm, Vec::Zero(2), 0.0, 0.1, 1e-3);
  const auto hp = a3_shock_halfplane(example());
  for (std::size_t k = 1; k < tr.size(); ++k) CHECK(hp.contains(tr.positions[k], tr.times[k]));
}

TEST_CASE("invalid models are rejected") {
  A3EndpointModel m = example();
  m.C = -Mat::Identity(1, 1);
  CHECK_THROWS_AS(validate(m), InvalidModel);
  m = example();
  m.B = make_vec({2.0});  // A C - B^2 < 0
  CHECK_THROWS_AS(validate(m), InvalidModel);
}

TEST_CASE("coefficient extraction from a generating family") {
  const Vec v = make_vec({0.8, 0.3}), w = make_vec({-0.2, 0.5}), z = make_vec({0.1, -0.9});
  const Vec p_star = make_vec({0.2, -0.1}), x_star = make_vec({0.4, 0.7});
  const double A = 1.3, B = 0.2, C = 0.9, t_star = 1.1;
  GeneratingFamily F = [&](const Vec& xi, const Vec& x, double t) {
    const double a = xi[0], b = xi[1];
    const Vec p = p_star + a * v + a * a * w + b * z;
    return A * a * a * a * a + 2 * B * a * a * b + C * b * b + p.dot(x - x_star) - (t - t_star) * 0.5 * p.squaredNorm();
  };
  ExtractionSpec spec;
  spec.x_star = x_star;
  spec.t_star = t_star;
  const auto m = a3_extract(F, spec);
  // alpha = (v, -p*.v), beta = (w, -(p*.w + |v|^2/2)), gamma = (z, -p*.z)
  CHECK(m.A == doctest::Approx(A).epsilon(1e-6));
  CHECK(m.B[0] == doctest::Approx(B).epsilon(1e-6));
  CHECK(m.C(0, 0) == doctest::Approx(C).epsilon(1e-6));
  CHECK((m.p_star - p_star).norm() < 1e-8);
  CHECK((m.alpha.head(2) - v).norm() < 1e-7);
  CHECK(m.alpha[2] == doctest::Approx(-p_star.dot(v)).epsilon(1e-7));
  CHECK((m.beta.head(2) - w).norm() < 1e-6);
  CHECK(m.beta[2] == doctest::Approx(-(p_star.dot(w) + 0.5 * v.squaredNorm())).epsilon(1e-6));
  CHECK((m.gamma.row(0).head(2).transpose() - z).norm() < 1e-7);
  CHECK(a3_tangent_check(m).ok);
}
