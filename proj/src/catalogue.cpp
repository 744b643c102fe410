#include "substatic/catalogue.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "substatic/errors.hpp"

namespace substatic {
namespace {

using nlohmann::json;

double require_number(const json& record, const std::string& key, const std::string& path) {
  if (!record.contains(key)) {
    throw InputError(path + "/" + key, "missing required field");
  }
  const json& v = record.at(key);
  if (!v.is_number()) {
    throw InputError(path + "/" + key, "expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw InputError(path + "/" + key, "expected a finite number");
  }
  return d;
}

std::optional<double> optional_number(const json& record, const std::string& key,
                                      const std::string& path) {
  if (!record.contains(key) || record.at(key).is_null()) {
    return std::nullopt;
  }
  return require_number(record, key, path);
}

std::vector<double> coefficient_array(const json& record, const std::string& key,
                                      const std::string& path) {
  if (!record.contains(key) || !record.at(key).is_array() || record.at(key).empty()) {
    throw InputError(path + "/" + key, "expected a nonempty coefficient array");
  }
  std::vector<double> a;
  for (std::size_t i = 0; i < record.at(key).size(); ++i) {
    const json& v = record.at(key).at(i);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw InputError(path + "/" + key + "/" + std::to_string(i), "expected a finite number");
    }
    a.push_back(v.get<double>());
  }
  return a;
}

SquaredPotentialFn polynomial_squared(std::vector<double> a) {
  return [a = std::move(a)](double s) {
    SquaredPotential q;
    for (std::size_t i = a.size(); i-- > 0;) {
      q.d2 = q.d2 * s + 2.0 * q.d1;
      q.d1 = q.d1 * s + q.value;
      q.value = q.value * s + a[i];
    }
    return q;
  };
}

EtaFn polynomial_eta(std::vector<double> a) {
  return [a = std::move(a)](double t) {
    EtaValue e;
    for (std::size_t i = a.size(); i-- > 0;) {
      e.d2 = e.d2 * t + 2.0 * e.d1;
      e.d1 = e.d1 * t + e.value;
      e.value = e.value * t + a[i];
    }
    return e;
  };
}

}  // namespace

CatalogueEntry model_from_json(const json& record, const std::string& path) {
  if (!record.is_object()) {
    throw InputError(path.empty() ? "/" : path, "model record must be an object");
  }
  if (!record.contains("name") || !record.at("name").is_string()) {
    throw InputError(path + "/name", "missing or non-string model name");
  }
  ModelSpec spec;
  spec.name = record.at("name").get<std::string>();
  const double n = require_number(record, "n", path);
  if (n != std::floor(n)) {
    throw InputError(path + "/n", "dimension must be an integer");
  }
  spec.n = static_cast<int>(n);
  spec.c_cross = require_number(record, "c_cross", path);
  spec.c_pot = optional_number(record, "c_pot", path).value_or(spec.c_cross);
  spec.s_max = require_number(record, "s_max", path);
  spec.cross_volume = optional_number(record, "cross_volume", path);
  spec.horizon_search_lo = optional_number(record, "horizon_search_lo", path);

  const std::string kind = record.value("kind", std::string("closed_form"));
  std::optional<ClosedFormPotential> closed;
  if (kind == "closed_form") {
    closed = ClosedFormPotential{require_number(record, "lambda", path),
                                 require_number(record, "m", path)};
    spec.potential = PotentialProfile::closed_form(closed->lambda, closed->m);
  } else if (kind == "tabulated") {
    if (!record.contains("samples") || !record.at("samples").is_array()) {
      throw InputError(path + "/samples", "expected an array of [s, f] pairs");
    }
    std::vector<std::pair<double, double>> samples;
    const json& arr = record.at("samples");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const json& p = arr.at(i);
      if (!p.is_array() || p.size() != 2 || !p.at(0).is_number() || !p.at(1).is_number()) {
        throw InputError(path + "/samples/" + std::to_string(i), "expected [s, f]");
      }
      samples.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    try {
      spec.potential = PotentialProfile::tabulated(std::move(samples));
    } catch (const Error& e) {
      throw InputError(path + "/samples", e.what());
    }
  } else if (kind == "eta_polynomial") {
    spec.potential = PotentialProfile::from_eta(
        spec.c_pot, spec.n, polynomial_eta(coefficient_array(record, "eta", path)), spec.name);
  } else if (kind == "f2_polynomial") {
    spec.potential = PotentialProfile::callable(
        polynomial_squared(coefficient_array(record, "f2", path)), spec.name);
  } else {
    throw InputError(path + "/kind", "unknown potential kind '" + kind + "'");
  }

  try {
    return {WarpedProductModel::create(std::move(spec)), kind, closed};
  } catch (const ModelError& e) {
    throw InputError(path.empty() ? "/" : path, e.what());
  } catch (const DomainError& e) {
    throw InputError(path.empty() ? "/" : path, e.what());
  }
}

json model_to_json(const CatalogueEntry& entry) {
  const WarpedProductModel& m = entry.model;
  json out = {{"name", m.name()},       {"n", m.n()},         {"c_cross", m.c_cross()},
              {"c_pot", m.c_pot()},     {"kind", entry.kind}, {"s_max", m.s_max()},
              {"cross_volume", m.cross_volume()}};
  if (entry.closed_form) {
    out["lambda"] = entry.closed_form->lambda;
    out["m"] = entry.closed_form->m;
  }
  out["horizon"] = m.has_horizon() ? json(*m.horizon()) : json(nullptr);
  return out;
}

std::vector<CatalogueEntry> parse_catalogue(const json& doc) {
  const json* list = &doc;
  std::string prefix;
  if (doc.is_object()) {
    if (!doc.contains("models")) {
      throw InputError("/models", "missing model list");
    }
    list = &doc.at("models");
    prefix = "/models";
  }
  if (!list->is_array()) {
    throw InputError(prefix.empty() ? "/" : prefix, "expected an array of models");
  }
  if (list->empty()) {
    throw InputError(prefix.empty() ? "/" : prefix, "catalogue is empty");
  }
  std::vector<CatalogueEntry> out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const std::string path = prefix + "/" + std::to_string(i);
    CatalogueEntry entry = model_from_json(list->at(i), path);
    if (find_model(out, entry.model.name()) != nullptr) {
      throw InputError(path + "/name", "duplicate model name '" + entry.model.name() + "'");
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<CatalogueEntry> load_catalogue(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError(path.string(), "cannot open catalogue");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string(), std::string("invalid JSON: ") + e.what());
  }
  return parse_catalogue(doc);
}

std::vector<CatalogueEntry> builtin_catalogue() {
  const json doc = json::array({
      {{"name", "SCHW3"}, {"n", 3}, {"c_cross", 1.0}, {"lambda", 0.0}, {"m", 0.5}, {"s_max", 3.0}},
      {{"name", "SCHW4"}, {"n", 4}, {"c_cross", 1.0}, {"lambda", 0.0}, {"m", 0.5}, {"s_max", 3.0}},
      {{"name", "ADS0"},
       {"n", 3},
       {"c_cross", -1.0},
       {"lambda", -1.0},
       {"m", 0.0},
       {"s_max", 3.0},
       {"cross_volume", 4.0 * std::numbers::pi}},
      {{"name", "SADS3"}, {"n", 3}, {"c_cross", 1.0}, {"lambda", -1.0}, {"m", 0.5}, {"s_max", 3.0}},
      {{"name", "DSS"}, {"n", 3}, {"c_cross", 1.0}, {"lambda", 1.0}, {"m", 0.1}, {"s_max", 0.8}},
      {{"name", "EUCLID"}, {"n", 3}, {"c_cross", 1.0}, {"lambda", 0.0}, {"m", 0.0}, {"s_max", 2.0}},
  });
  return parse_catalogue(doc);
}

CatalogueEntry builtin_model(const std::string& name) {
  for (auto& e : builtin_catalogue()) {
    if (e.model.name() == name) {
      return e;
    }
  }
  throw InputError("/model", "unknown built-in model '" + name + "'");
}

const CatalogueEntry* find_model(const std::vector<CatalogueEntry>& catalogue,
                                 const std::string& name) {
  for (const auto& e : catalogue) {
    if (e.model.name() == name) {
      return &e;
    }
  }
  return nullptr;
}

}  // namespace substatic
