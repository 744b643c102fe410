// hkcheck: run single scenarios or the acceptance matrix over a model catalogue.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "substatic/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Substatic warped-product checks: Heintze–Karcher deficit, flow, torsion"};
  app.require_subcommand(1);

  substatic::RunOptions options;
  std::string out_dir = ".";
  std::uint64_t seed = 42;
  unsigned workers = 1;
  double tol_scale = 1.0;
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--workers", workers, "Maximum concurrent scenarios or models")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for randomized sweeps")->capture_default_str();
  app.add_option("--tol-scale", tol_scale, "Multiplier applied to every tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string config;
  auto* run = app.add_subcommand("run", "Run one scenario config");
  run->fallthrough();
  run->add_option("config", config, "Scenario JSON")->required();

  std::string catalogue;
  auto* suite = app.add_subcommand("suite", "Run the acceptance matrix over a catalogue");
  suite->fallthrough();
  suite->add_option("catalogue", catalogue, "Catalogue JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : substatic::kExitInputError;
  }

  options.out_dir = out_dir;
  options.seed = seed;
  options.workers = workers;
  options.tol_scale = tol_scale;

  int code = substatic::kExitPass;
  if (*run) {
    code = substatic::run_scenario_file(config, options);
    std::cout << config << ": " << (code == 0 ? "pass" : code == 1 ? "fail" : "input error")
              << " (exit " << code << ")\n";
  } else {
    code = substatic::run_suite_file(catalogue, options);
    std::cout << "suite " << catalogue << ": "
              << (code == 0 ? "pass" : code == 1 ? "fail" : "input error") << " (exit " << code
              << ")\n";
  }
  return code;
}
