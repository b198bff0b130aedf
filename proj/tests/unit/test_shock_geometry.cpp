#include "adhesion/errors.hpp"
#include "adhesion/shock_geometry.hpp"

#include "../oracles/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace adhesion;

namespace {

bool obtuse(const Vec& a, const Vec& b, const Vec& c) {
  return (b - a).dot(c - a) < 0 || (a - b).dot(c - b) < 0 || (a - c).dot(b - c) < 0;
}

double segment_distance(const Vec& x, const Vec& a, const Vec& b) {
  const Vec d = b - a;
  const double s = std::clamp((x - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (x - a - s * d).norm();
}

}  // namespace

TEST_CASE("node classification") {
  const auto acute = classify_node(make_vec({1.0, 0.0}), make_vec({-1.0, 0.0}), make_vec({0.0, 1.5}));
  CHECK(acute.cls == NodeClass::Acute);
  CHECK((acute.node_velocity - acute.particle_velocity).norm() < 1e-12);
  const auto ob = classify_node(make_vec({1.0, 0.0}), make_vec({-1.0, 0.0}), make_vec({0.0, 0.5}));
  CHECK(ob.cls == NodeClass::Obtuse);
  CHECK((ob.particle_velocity - make_vec({0.0, 0.0})).norm() < 1e-12);
  CHECK(ob.min_cos < 0.0);
  CHECK_THROWS_AS(classify_node(make_vec({0.0, 0.0}), make_vec({1.0, 0.0}), make_vec({2.0, 0.0})),
                  DegenerateConfiguration);
}

TEST_CASE("four-momentum configurations") {
  const auto narrow = classify_configuration(
      MomentumSet{make_vec({-1.0, 0.0}), make_vec({1.0, 0.0}), make_vec({0.0, 0.3}), make_vec({0.2, -0.4})});
  CHECK(narrow.cls == ConfigClass::Narrow);
  CHECK(narrow.post_transition_cluster == ClusterState::Stable);
  CHECK(narrow.transition == Transition::Sixth);

  const auto wide = classify_configuration(MomentumSet{make_vec({1.0, 0.0}), make_vec({-0.5, 0.866}),
                                                       make_vec({-0.5, -0.866}), make_vec({0.1, 0.05})});
  CHECK(wide.cls == ConfigClass::Wide);
  CHECK(wide.post_transition_cluster == ClusterState::Growing);
  CHECK(wide.transition == Transition::Fifth);
  CHECK(wide.hull_size == 3);

  const std::vector<Vec> chain{make_vec({0.0, 0.0}), make_vec({1.0, 0.1}), make_vec({2.0, 0.05}),
                               make_vec({3.0, 0.2})};
  for (int drop = 0; drop < 4; ++drop) {
    std::vector<Vec> t;
    for (int i = 0; i < 4; ++i)
      if (i != drop) t.push_back(chain[static_cast<std::size_t>(i)]);
    REQUIRE(obtuse(t[0], t[1], t[2]));
  }
  const auto to = classify_configuration(MomentumSet(chain));
  CHECK(to.cls == ConfigClass::TotallyObtuse);
  CHECK(to.narrow);
  CHECK(to.post_transition_cluster == ClusterState::None);
}

TEST_CASE("diagram edges agree with the grid tie oracle") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int done = 0;
  while (done < 6) {
    std::vector<Vec> p;
    for (int i = 0; i < 4; ++i) p.push_back(make_vec({u(rng), u(rng)}));
    const double tau = done % 2 ? 1.0 : -0.7;
    std::optional<LocalLinearModel> model;
    try {
      model.emplace(MomentumSet(p));
    } catch (const GenericityViolation&) {
      continue;
    }
    const auto complex = shock_diagram(*model, tau);
    const double lo = -2.5, hi = 2.5;
    const int n = 200;
    const double h = (hi - lo) / n;
    for (const auto& t : oracle::grid_ties(p, tau, lo, hi, n)) {
      double best = 1e9;
      for (const auto& e : complex.edges) {
        const double s0 = std::max(e.s_min, -100.0), s1 = std::min(e.s_max, 100.0);
        best = std::min(best, segment_distance(t, e.point(s0), e.point(s1)));
      }
      CHECK(best <= 2.0 * h);
    }
    ++done;
  }
}

TEST_CASE("acute nodes of a positive-time diagram") {
  const LocalLinearModel m(MomentumSet{make_vec({1.0, 0.0}), make_vec({-0.5, 0.8}), make_vec({-0.4, -0.9})});
  const auto c = shock_diagram(m, 1.0);
  REQUIRE(c.nodes.size() == 1);
  CHECK(c.nodes[0].info.cls == NodeClass::Acute);
  CHECK(c.edges.size() == 3);
  CHECK(c.special_point.size() == 2);
  CHECK_THROWS_AS(shock_diagram(m, 0.0), DegenerateConfiguration);
}
