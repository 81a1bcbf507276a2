// covert: command-line driver.
//
//   covert solve [CONFIG] --mode single|multi --bench proposed|b1|b2|b3 --out DIR
//   covert sweep SPEC --out DIR [--parallelism N]
//   covert verify --out DIR [--trials N] [--seed S] [--parallelism N]
//   covert defaults

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "covert/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Robust covert UAV trajectory and power optimization"};
  app.require_subcommand(1);

  std::string config = "scenario1", mode = "single", bench = "proposed", out = "out", spec;
  std::uint64_t seed = 42;
  long trials = 1000000;
  int parallelism = 0;

  auto* solve = app.add_subcommand("solve", "Run the SCA optimizer on one scenario");
  solve->add_option("config", config, "Scenario JSON file, or scenario1 / scenario2");
  solve->add_option("--mode", mode, "Warden receiver model")->check(CLI::IsMember({"single", "multi"}));
  solve->add_option("--bench", bench, "Scheme")->check(CLI::IsMember({"proposed", "b1", "b2", "b3"}));
  solve->add_option("--out", out, "Output directory");
  solve->add_option("--seed", seed, "Recorded in the manifest");

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("spec", spec, "Sweep JSON file")->required();
  sweep->add_option("--out", out, "Output directory");
  sweep->add_option("--parallelism", parallelism, "Concurrent cells (0: automatic)");

  auto* verify = app.add_subcommand("verify", "Check the detection formulas against independent oracles");
  verify->add_option("--out", out, "Output directory");
  verify->add_option("--trials", trials, "Monte-Carlo trials per case");
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--parallelism", parallelism, "Simulation threads (0: automatic)");

  auto* defaults = app.add_subcommand("defaults", "Print the two built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : covert::kExitValidation;
  }

  if (*solve)
    return covert::cmd_solve(config, covert::parse_mode(mode), covert::parse_benchmark(bench), out, seed,
                             std::cerr);
  if (*sweep) return covert::cmd_sweep(spec, out, parallelism, std::cerr);
  if (*verify) return covert::cmd_verify(out, trials, seed, parallelism, std::cerr);
  if (*defaults) std::cout << covert::cmd_defaults();
  return 0;
}
