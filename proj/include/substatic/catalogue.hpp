#pragma once

// Named model catalogues: built-in reference models and JSON documents.
//
// A catalogue document is either a list of model records or {"models": [...]}.
// Model record fields: name, n, c_cross, c_pot (defaults to c_cross), kind,
// s_max, optional cross_volume and horizon_search_lo, plus per kind:
//   closed_form    lambda, m
//   tabulated      samples: [[s, f], ...]
//   eta_polynomial eta: [a0, a1, ...] for η(t) = Σ a_i t^i
//   f2_polynomial  f2: [a0, a1, ...] for f² = Σ a_i s^i

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "substatic/warped_geometry.hpp"

namespace substatic {

struct CatalogueEntry {
  WarpedProductModel model;
  std::string kind;
  /// Parameters of closed-form entries; absent for other kinds.
  std::optional<ClosedFormPotential> closed_form;
};

/// Throws InputError with the offending field path.
CatalogueEntry model_from_json(const nlohmann::json& record, const std::string& path = "");
nlohmann::json model_to_json(const CatalogueEntry& entry);

std::vector<CatalogueEntry> parse_catalogue(const nlohmann::json& doc);
std::vector<CatalogueEntry> load_catalogue(const std::filesystem::path& path);

/// SCHW3, SCHW4, ADS0, SADS3, DSS, EUCLID.
std::vector<CatalogueEntry> builtin_catalogue();
/// Throws InputError when `name` is unknown.
CatalogueEntry builtin_model(const std::string& name);

const CatalogueEntry* find_model(const std::vector<CatalogueEntry>& catalogue,
                                 const std::string& name);

}  // namespace substatic
