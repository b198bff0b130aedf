#include "adhesion/errors.hpp"
#include "adhesion/scenario.hpp"

#include <doctest.h>

#include <string>

using namespace adhesion;
using nlohmann::json;

namespace {

json local_model() {
  return json::parse(R"({
    "kind": "LocalModel",
    "potential": {"momenta": [[1.0, 0.0], [-0.5, 0.8], [-0.4, -0.9]], "force": 0.25},
    "time": {"t0": 0.0, "T": 0.5, "step": 0.01},
    "particles": [[0.1, 0.2]],
    "outputs": ["csv", "svg"],
    "svg_times": [0.5]
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "no error";
}

}  // namespace

TEST_CASE("config round trip") {
  for (const json& doc : {local_model(), json::parse(R"({
        "kind": "ConvergenceStudy", "name": "c",
        "potential": {"period": 6.283185307179586, "modes": [{"k": 1, "cos": 1.0}, {"k": 3, "sin": -0.2}]},
        "nu_list": [0.1, 0.01], "time": {"T": 2.0}, "particles": [[1.0]]})"),
                          json::parse(R"({
        "kind": "FiniteMinFamily",
        "potential": {"branches": [{"momentum": [1.0]}, {"constant": 0.1, "momentum": [-0.5], "curvature": 0.2}]},
        "time": {"T": 1.0}})"),
                          json::parse(R"({
        "kind": "A3",
        "potential": {"A": 1.0, "B": [0.0], "C": [[1.0]], "alpha": [1.0, 0.0, 0.0], "beta": [0.0, 0.0, -1.0],
                      "gamma": [[0.0, 1.0, 0.0]], "p_star": [0.0, 0.0]},
        "time": {"T": 0.1}})")}) {
    const ScenarioConfig c = parse_config(doc);
    const ScenarioConfig again = parse_config(serialize_config(c));
    CHECK(c == again);
    CHECK(serialize_config(again) == serialize_config(c));
  }
}

TEST_CASE("the shipped scenarios parse") {
  for (const char* name : {"cos_benchmark", "flat", "acute_node", "moving_shock", "a3_endpoint"}) {
    const auto c = load_config(std::string(ADHESION_SOURCE_DIR) + "/scenarios/" + name + ".json");
    CHECK(c.name == name);
    CHECK_NOTHROW(build_model(c));
  }
}

TEST_CASE("config errors carry the offending path") {
  json d = local_model();
  d["potential"]["momenta"][1] = {1.0};
  CHECK(error_path(d) == "/potential/momenta/1");

  d = local_model();
  d["time"]["step"] = 0.0;
  CHECK(error_path(d) == "/time/step");

  d = local_model();
  d["extra"] = 1;
  CHECK(error_path(d) == "/extra");

  d = local_model();
  d["potential"]["momenta"] = {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  CHECK(error_path(d) == "/potential");

  d = local_model();
  d["particles"][0] = {1.0};
  CHECK(error_path(d) == "/particles/0");

  d = local_model();
  d["outputs"][1] = "png";
  CHECK(error_path(d) == "/outputs/1");

  d = local_model();
  d["kind"] = "Nope";
  CHECK(error_path(d) == "/kind");

  json c = json::parse(R"({"kind": "ConvergenceStudy",
      "potential": {"period": 6.28, "modes": [{"k": 1, "cos": 1.0}]},
      "nu_list": [0.1, 0.2], "time": {"T": 1.0}})");
  CHECK(error_path(c) == "/nu_list/1");
  c["nu_list"] = {0.1};
  CHECK(error_path(c) == "/nu_list");
  c["nu_list"] = {0.1, 0.05};
  c["potential"]["period"] = -1.0;
  CHECK(error_path(c) == "/potential/period");

  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
