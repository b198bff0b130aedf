#include "adhesion/errors.hpp"
#include "adhesion/runner.hpp"
#include "adhesion/scenario.hpp"
#include "adhesion/suites.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"adhesion: limit trajectories, viscous oracles and shock geometry"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite;
  std::uint64_t seed = 0;
  double step = 0.0, tol = 0.0;
  std::string golden, report_path;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--step", step, "time step override")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "activation tolerance override")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(adhesion::suite_names()));
  verify->add_option("--seed", seed, "randomness seed");
  verify->add_option("--step", step, "step override")->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "tolerance override")->check(CLI::PositiveNumber);
  verify->add_option("--golden", golden, "stored convergence table");
  verify->add_option("--report", report_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const auto config = adhesion::load_config(config_path);
      const auto result = adhesion::run_scenario(config, out_dir, {step, tol});
      if (result.exit_code != 0) std::cerr << result.message;
      return result.exit_code;
    }
    adhesion::SuiteOptions options;
    options.seed = seed;
    options.step = step;
    options.tol = tol;
    if (!golden.empty()) options.golden = golden;
    const auto result = adhesion::run_suite(suite, options);
    const std::string text = adhesion::serialize_report(result);
    if (report_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream(report_path, std::ios::binary) << text;
    }
    if (!result.pass) {
      std::cerr << fmt::format("suite {} failed\n{}", suite, result.failure);
      return 1;
    }
    return 0;
  } catch (const adhesion::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
