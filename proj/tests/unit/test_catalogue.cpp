#include <doctest.h>

#include <cmath>

#include "substatic/catalogue.hpp"
#include "substatic/errors.hpp"

using namespace substatic;
using nlohmann::json;

TEST_CASE("builtin catalogue") {
  const auto cat = builtin_catalogue();
  CHECK(cat.size() == 6);
  CHECK(find_model(cat, "SADS3") != nullptr);
  CHECK(find_model(cat, "nope") == nullptr);
  CHECK_THROWS_AS(builtin_model("nope"), InputError);
}

TEST_CASE("catalogue file matches the built-ins") {
  const auto file = load_catalogue(SUBSTATIC_DATA_DIR "/catalogue.json");
  const auto cat = builtin_catalogue();
  REQUIRE(file.size() == cat.size());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(model_to_json(file[i]) == model_to_json(cat[i]));
  }
}

TEST_CASE("polynomial kinds") {
  const json rec = {{"name", "Q"}, {"n", 3}, {"c_cross", 1.0}, {"kind", "f2_polynomial"},
                    {"f2", {1.0, 0.0, 1.0, 0.0, -0.5}}, {"s_max", 1.3}};
  const CatalogueEntry e = model_from_json(rec);
  const double s = 1.1;
  CHECK(e.model.squared(s).value == doctest::Approx(1 + s * s - 0.5 * std::pow(s, 4)));
  CHECK(e.model.squared(s).d1 == doctest::Approx(2 * s - 2 * std::pow(s, 3)));
  CHECK(e.model.squared(s).d2 == doctest::Approx(2 - 6 * s * s));
  CHECK_FALSE(e.model.has_horizon());

  // η = −2m t reproduces Schwarzschild.
  const json eta = {{"name", "E"}, {"n", 3}, {"c_cross", 1.0}, {"kind", "eta_polynomial"},
                    {"eta", {0.0, -1.0}}, {"s_max", 3.0}};
  const CatalogueEntry s3 = model_from_json(eta);
  CHECK(*s3.model.horizon() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("input errors carry paths") {
  auto path_of = [](const json& doc) {
    try {
      parse_catalogue(doc);
    } catch (const InputError& e) {
      return e.path();
    }
    return std::string("none");
  };
  CHECK(path_of(json::array()) == "/");
  CHECK(path_of(json::object()) == "/models");
  CHECK(path_of(json::array({{{"name", "A"}, {"n", 3}, {"c_cross", 1}, {"lambda", 0}, {"m", 0.5}}})) ==
        "/0/s_max");
  CHECK(path_of(json::array({{{"name", "A"}, {"n", 3.5}, {"c_cross", 1}, {"s_max", 2}}})) == "/0/n");
  CHECK(path_of(json::array({{{"name", "A"}, {"n", 3}, {"c_cross", 1}, {"s_max", 2}, {"kind", "x"}}})) ==
        "/0/kind");
  const json rec = {{"name", "A"}, {"n", 3}, {"c_cross", 1}, {"lambda", 0}, {"m", 0.5}, {"s_max", 3}};
  CHECK(path_of(json::array({rec, rec})) == "/1/name");
  CHECK(path_of(json::array({{{"name", "T"}, {"n", 3}, {"c_cross", 1}, {"s_max", 2},
                               {"kind", "tabulated"}, {"samples", {{1, 0}, {1, 1}}}}})) ==
        "/0/samples");
}
