#pragma once

// Batch front end shared by the hkcheck tool and the tests: single scenarios
// (JSON configs) and the acceptance matrix over a catalogue.
//
// Exit codes: 0 all checks pass, 1 a check failed or a numerical failure was
// diagnosed, 2 the input is malformed.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "substatic/catalogue.hpp"

namespace substatic {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitInputError = 2;

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  std::uint64_t seed = 42;
  double tol_scale = 1.0;
  bool write_files = true;
};

/// One CSV table produced by a task.
struct Table {
  std::string name;
  std::string csv;
};

struct ScenarioOutcome {
  std::string name;
  int exit_code = kExitPass;
  nlohmann::json summary;
  std::vector<Table> tables;
};

/// Runs one parsed config. Models are looked up in `catalogue`, unless the
/// config carries an inline model record. Never throws for bad input: errors
/// are mapped to exit codes and described in the summary.
ScenarioOutcome run_scenario(const nlohmann::json& config,
                             const std::vector<CatalogueEntry>& catalogue,
                             const RunOptions& options);

/// Loads the config (its optional "catalogue" field is resolved relative to the
/// config file, the built-in catalogue is used otherwise), runs it and writes
/// `<out>/<name>.summary.json` and `<out>/<name>.<table>.csv`.
int run_scenario_file(const std::filesystem::path& config_path, const RunOptions& options);

struct SuiteRow {
  std::string model;
  std::string row;
  std::string status;  ///< pass, fail or skipped
  double value = 0.0;
  std::string detail;
};

struct SuiteSummary {
  std::vector<SuiteRow> rows;
  int exit_code = kExitPass;
};

/// Acceptance matrix over every model. Rows: substatic, cn_consistency,
/// sphere_equality, perturbed_deficit, sphere_flow, torsion, classification.
/// When the substatic row fails, the remaining rows for that model are skipped.
SuiteSummary run_suite(const std::vector<CatalogueEntry>& catalogue, const RunOptions& options);

/// Loads the catalogue and writes `<out>/suite.summary.json` and `<out>/suite.results.csv`.
int run_suite_file(const std::filesystem::path& catalogue_path, const RunOptions& options);

std::string suite_csv(const SuiteSummary& summary);

}  // namespace substatic
