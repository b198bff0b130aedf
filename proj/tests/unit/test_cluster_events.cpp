#include "adhesion/cluster_events.hpp"
#include "adhesion/svg.hpp"

#include <doctest.h>

using namespace adhesion;

TEST_CASE("a node triangle turning obtuse releases its cluster") {
  // angle at the third momentum is acute while s > 1
  MomentumPath path = [](double t) {
    return std::array<Vec, 3>{make_vec({1.0, 0.0}), make_vec({-1.0, 0.0}), make_vec({0.0, 2.0 - t})};
  };
  const auto scan = detect_cluster_events(path, 0.0, 1.5, 0.01);
  REQUIRE(scan.events.size() == 1);
  CHECK(scan.events[0].kind == ClusterEventKind::Release);
  CHECK(scan.events[0].time == doctest::Approx(1.0).epsilon(1e-4));
  REQUIRE(scan.clusters.size() == 1);
  CHECK(scan.clusters[0].state == ClusterState::Growing);

  MomentumPath back = [](double t) {
    return std::array<Vec, 3>{make_vec({1.0, 0.0}), make_vec({-1.0, 0.0}), make_vec({0.0, 0.5 + t})};
  };
  const auto born = detect_cluster_events(back, 0.0, 1.0, 0.01);
  REQUIRE(born.events.size() == 1);
  CHECK(born.events[0].kind == ClusterEventKind::Birth);
  CHECK(born.events[0].time == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("transition events follow the configuration class") {
  const LocalLinearModel narrow(
      MomentumSet{make_vec({-1.0, 0.0}), make_vec({1.0, 0.0}), make_vec({0.0, 0.3}), make_vec({0.2, -0.4})});
  const auto n = transition_event(narrow);
  REQUIRE(n.has_value());
  CHECK(n->kind == ClusterEventKind::Release);
  const LocalLinearModel wide(MomentumSet{make_vec({1.0, 0.0}), make_vec({-0.5, 0.866}), make_vec({-0.5, -0.866}),
                                          make_vec({0.1, 0.05})});
  const auto w = transition_event(wide);
  REQUIRE(w.has_value());
  CHECK(w->kind == ClusterEventKind::Birth);
  const LocalLinearModel chain(MomentumSet{make_vec({0.0, 0.0}), make_vec({1.0, 0.1}), make_vec({2.0, 0.05}),
                                           make_vec({3.0, 0.2})});
  CHECK(!transition_event(chain).has_value());
}

TEST_CASE("svg of an acute node") {
  const LocalLinearModel m(MomentumSet{make_vec({1.0, 0.0}), make_vec({-0.5, 0.8}), make_vec({-0.4, -0.9})});
  SvgScene scene{shock_diagram(m, 1.0), {}, true};
  scene.particles.push_back({make_vec({0.5, 0.5}), make_vec({-0.3, -0.2}), ClusterState::None});
  scene.particles.push_back({scene.complex.nodes[0].position, make_vec({0.0, 0.0}), ClusterState::Growing});
  const std::string svg = render_svg(scene);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);
  CHECK(svg.find("fill=\"black\" stroke=\"black\"") != std::string::npos);
  CHECK(svg.find("marker-end=\"url(#arrow)\"") != std::string::npos);
  CHECK(svg.find("<line") != std::string::npos);
  CHECK(svg == render_svg(scene));
}
