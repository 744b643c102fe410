#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "substatic/catalogue.hpp"
#include "substatic/errors.hpp"
#include "substatic/functionals.hpp"

using namespace substatic;
using std::numbers::pi;

TEST_CASE("sphere terms in SCHW3 match closed forms") {
  const auto m = builtin_model("SCHW3").model;
  const HKReport r = hk_deficit(m, sphere_graph(m, 2.0, 32));
  CHECK(r.lhs == doctest::Approx(32.0 * pi / 3.0).epsilon(1e-13));
  CHECK(r.weighted_volume == doctest::Approx(28.0 * pi / 3.0).epsilon(1e-13));
  CHECK(r.horizon_term == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-13));
  CHECK(std::abs(r.deficit) < 1e-12 * r.scale);
}

TEST_CASE("horizon constant: closed form against integral form") {
  for (const auto& e : builtin_catalogue()) {
    const HorizonConstant a = horizon_constant_closed(e.model);
    const HorizonConstant b = horizon_constant_integral(e.model);
    CAPTURE(e.model.name());
    CHECK(a.has_horizon == b.has_horizon);
    CHECK(std::abs(a.value - b.value) < 1e-10 * std::max(1.0, std::abs(a.value)));
  }
  CHECK(horizon_constant_closed(builtin_model("SCHW3").model).value ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // SADS3: f² = 1 + s² − 1/s; s0 solves s³ + s − 1 = 0; k = ½(2s0 + 1/s0²).
  const double s0 = 0.6823278038280193;
  const double k = 0.5 * (2.0 * s0 + 1.0 / (s0 * s0));
  CHECK(horizon_constant_closed(builtin_model("SADS3").model).value ==
        doctest::Approx(s0 / (3.0 * k)).epsilon(1e-12));
}

TEST_CASE("potential rescaling scales every term") {
  const auto m = builtin_model("SCHW3").model;
  const std::vector<Perturbation> terms{{0.15, 1}, {0.05, 3}};
  const RadialGraph g = perturbed_graph(m, 2.0, terms, 48);
  const HKReport a = hk_deficit(m, g);
  HKOptions o;
  o.potential_scale = 2.5;
  const HKReport b = hk_deficit(m, g, o);
  CHECK(b.deficit == doctest::Approx(2.5 * a.deficit).epsilon(1e-12));
  CHECK(a.deficit > 0.0);
}

TEST_CASE("wrong horizon constant breaks equality") {
  const auto m = builtin_model("SCHW3").model;
  HKOptions o;
  o.cn_override = 0.5;
  const HKReport r = hk_deficit(m, sphere_graph(m, 2.0, 16), o);
  CHECK(std::abs(r.deficit) > 1e-3);
  const CmcCheck c = minkowski_cmc_check(m, sphere_graph(m, 2.0, 16), o);
  CHECK(c.cmc);
  CHECK_FALSE(c.pass);
}

TEST_CASE("mean convexity is enforced") {
  const auto m = builtin_model("EUCLID").model;
  // A deep dimple near the pole makes H negative there.
  const RadialGraph g = graph_from_function(
      m, [](double t) { return 1.0 - 0.6 * std::exp(-8.0 * t * t); }, 64);
  CHECK_THROWS_AS(hk_deficit(m, g), MeanConvexityError);
}

TEST_CASE("multi-horizon gap identity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<HorizonComponent> c(1 + i % 4);
    double a = 0, b = 0, d = 0;
    for (auto& h : c) {
      h = {u(rng), u(rng), u(rng)};
      a += h.k * h.k / h.s0 * h.volume;
      b += h.s0 * h.volume;
      d += h.k * h.volume;
    }
    const MultiHorizonResult r = multi_horizon_equality_check(c);
    CHECK(r.gap >= 0.0);
    CHECK(r.gap == doctest::Approx(a * b - d * d).epsilon(1e-9).scale(a * b));
  }
  std::vector<HorizonComponent> eq{{0.5, 1.0, 2.0}, {1.5, 3.0, 0.7}};
  CHECK(multi_horizon_equality_check(eq).holds);
  std::vector<HorizonComponent> bad{{0.0, 1.0, 1.0}};
  CHECK_THROWS_AS(multi_horizon_equality_check(bad), DomainError);
}

TEST_CASE("report json keys") {
  const auto m = builtin_model("SCHW3").model;
  const auto j = to_json(hk_deficit(m, sphere_graph(m, 2.0, 16)));
  for (const char* key : {"lhs", "volume", "horizon", "deficit", "cn", "model", "graph_hash"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.at("graph_hash").get<std::string>().size() == 16);
}
