#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/diagonal_metric.hpp"
#include "substatic/catalogue.hpp"
#include "substatic/errors.hpp"
#include "substatic/warped_geometry.hpp"

using namespace substatic;

namespace {

WarpedProductModel closed(double c, double lambda, double m, int n, double s_max) {
  ModelSpec spec;
  spec.name = "test";
  spec.n = n;
  spec.c_cross = c;
  spec.c_pot = c;
  spec.s_max = s_max;
  spec.potential = PotentialProfile::closed_form(lambda, m);
  return WarpedProductModel::create(spec);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("closed-form potential and derivatives") {
  const auto m = closed(1.0, -1.0, 0.5, 3, 3.0);
  for (double s : {1.0, 1.5, 2.7}) {
    const SquaredPotential q = m.squared(s);
    CHECK(q.value == doctest::Approx(1.0 + s * s - 1.0 / s).epsilon(1e-14));
    CHECK(q.d1 == doctest::Approx(2.0 * s + 1.0 / (s * s)).epsilon(1e-14));
    CHECK(q.d2 == doctest::Approx(2.0 - 2.0 / (s * s * s)).epsilon(1e-14));
  }
}

TEST_CASE("horizon radius agrees with bisection") {
  for (const auto& e : builtin_catalogue()) {
    const auto& m = e.model;
    if (!m.has_horizon()) {
      CHECK(m.s_min() == 0.0);
      continue;
    }
    const double s0 = oracle::bisect_horizon([&](double s) { return m.potential().squared(s, m.c_pot(), m.n()).value; },
                                             1e-3 * m.s_max(), m.s_max());
    CHECK(*m.horizon() == doctest::Approx(s0).epsilon(1e-12));
  }
  CHECK(*builtin_model("SCHW3").model.horizon() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*builtin_model("DSS").model.horizon() == doctest::Approx(0.2091488).epsilon(1e-6));
}

TEST_CASE("surface gravity matches half the slope of f^2") {
  const auto m = builtin_model("SCHW3").model;
  CHECK(surface_gravity(m) == doctest::Approx(0.5).epsilon(1e-14));
  const auto schw4 = builtin_model("SCHW4").model;
  // f² = 1 − s^{-2}, s0 = 1, ½(f²)′ = s^{-3} = 1.
  CHECK(surface_gravity(schw4) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("degenerate horizon is rejected") {
  ModelSpec spec;
  spec.name = "extremal";
  spec.n = 3;
  spec.s_max = 3.0;
  spec.potential = PotentialProfile::callable(
      [](double s) {
        const double a = 1.0 - 1.0 / s;
        return SquaredPotential{a * a, 2.0 * a / (s * s), 2.0 / std::pow(s, 4) - 4.0 * a / std::pow(s, 3)};
      },
      "extremal");
  spec.horizon_search_lo = 0.5;
  bool threw = false;
  try {
    const auto m = WarpedProductModel::create(spec);
    (void)surface_gravity(m);
  } catch (const ModelError&) {
    threw = true;
  } catch (const DomainError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("curvature components against finite-difference Ricci and Hessian") {
  std::mt19937_64 rng(7);
  for (const auto& e : builtin_catalogue()) {
    const auto& m = e.model;
    const int n = m.n();
    auto f2 = [&](double s) { return m.potential().squared(s, m.c_pot(), n).value; };
    const auto g = oracle::warped_metric(f2, n, m.c_cross());
    const double lo = m.s_min() + 0.1 * (m.s_max() - m.s_min());
    std::uniform_real_distribution<double> pick(lo, 0.98 * m.s_max());
    for (int k = 0; k < 5; ++k) {
      oracle::Point x(static_cast<std::size_t>(n), 1.1);
      x[0] = pick(rng);
      const double s = x[0];
      const double h = 1e-3 * std::min(1.0, s);
      const auto R = oracle::ricci(g, x, h);
      const auto gx = g(x);
      const double radial = R[0] / gx[0];
      const double tangential = R[static_cast<std::size_t>(n + 1)] / gx[1];
      CAPTURE(m.name());
      CAPTURE(s);
      CHECK(rel(ricci_components(m, s).radial, radial) < 1e-6);
      CHECK(rel(ricci_tangential_unit(m, s), tangential) < 1e-6);

      auto f = [&](const oracle::Point& y) { return std::sqrt(f2(y[0])); };
      const auto H = oracle::hessian(g, f, x, h);
      const double fs = std::sqrt(f2(s));
      const HessianOverF hf = hessian_over_f_components(m, s);
      CHECK(rel(hf.radial, H[0] / gx[0] / fs) < 1e-6);
      CHECK(rel(hf.tangential, H[static_cast<std::size_t>(n + 1)] / gx[1] / fs) < 1e-6);
      double lap = 0.0;
      for (std::size_t i = 0; i < gx.size(); ++i) lap += H[i * gx.size() + i] / gx[i];
      CHECK(rel(laplacian_f_over_f(m, s), lap / fs) < 1e-6);
    }
  }
}

TEST_CASE("tangential gap matches the tensor route") {
  for (const auto& e : builtin_catalogue()) {
    const auto samples = substatic_samples(e.model, GridSpec{50});
    for (const auto& smp : samples) {
      const SubstaticComponents c = substatic_components(e.model, smp.s);
      CAPTURE(e.model.name());
      CHECK(rel(smp.tangential_gap, c.tangential) < 1e-9);
      CHECK(std::abs(c.radial) < 1e-9 * (1.0 + smp.f * smp.f));
    }
  }
}

TEST_CASE("substatic verdicts and H4") {
  for (const auto& e : builtin_catalogue()) {
    const SubstaticReport r = substatic_check(e.model);
    CAPTURE(e.model.name());
    CHECK(r.substatic);
    CHECK(r.H4 == (e.closed_form->m > 0.0));
  }
  ModelSpec spec;
  spec.name = "quartic";
  spec.n = 3;
  spec.s_max = 1.3;
  spec.potential = PotentialProfile::callable(
      [](double s) {
        return SquaredPotential{1.0 + s * s - 0.5 * std::pow(s, 4), 2.0 * s - 2.0 * std::pow(s, 3),
                                2.0 - 6.0 * s * s};
      },
      "quartic");
  const SubstaticReport bad = substatic_check(WarpedProductModel::create(spec));
  CHECK_FALSE(bad.substatic);
  CHECK(bad.eta_convexity_min < 0.0);
}

TEST_CASE("eta fit recovers closed-form parameters") {
  for (const auto& e : builtin_catalogue()) {
    const DeSitterFit fit = fit_desitter_schwarzschild(eta_extract(e.model));
    CAPTURE(e.model.name());
    CHECK(std::abs(fit.lambda - e.closed_form->lambda) < 1e-10);
    CHECK(std::abs(fit.m - e.closed_form->m) < 1e-10);
  }
}

TEST_CASE("eta round trip through from_eta") {
  const double c = 1.0;
  const int n = 3;
  auto eta = [](double t) { return EtaValue{-1.5 * t + 0.3 * t * t, -1.5 + 0.6 * t, 0.6}; };
  ModelSpec spec;
  spec.name = "eta";
  spec.n = n;
  spec.s_max = 3.0;
  spec.potential = PotentialProfile::from_eta(c, n, eta, "eta");
  const auto m = WarpedProductModel::create(spec);
  const EtaProfile ex = eta_extract(m);
  for (double s : {1.2, 2.0, 2.9}) {
    const double t = std::pow(s, -3.0);
    if (t < ex.t_lo() || t > ex.t_hi()) continue;
    CHECK(ex(t).value == doctest::Approx(eta(t).value).epsilon(1e-12));
    CHECK(ex(t).d1 == doctest::Approx(eta(t).d1).epsilon(1e-9));
    CHECK(ex(t).d2 == doctest::Approx(0.6).epsilon(1e-7));
  }
}

TEST_CASE("tabulated profile tracks the closed form") {
  const auto ref = builtin_model("SCHW3").model;
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 2000; ++i) {
    const double s = 1.0 + 2.0 * i / 2000.0;
    samples.emplace_back(s, std::sqrt(std::max(0.0, 1.0 - 1.0 / s)));
  }
  ModelSpec spec;
  spec.name = "tab";
  spec.n = 3;
  spec.s_max = 3.0;
  spec.potential = PotentialProfile::tabulated(samples);
  const auto m = WarpedProductModel::create(spec);
  CHECK(*m.horizon() == doctest::Approx(1.0).epsilon(1e-9));
  for (double s : {1.3, 2.1, 2.95}) {
    CHECK(m.squared(s).value == doctest::Approx(ref.squared(s).value).epsilon(1e-8));
    CHECK(m.squared(s).d1 == doctest::Approx(ref.squared(s).d1).epsilon(1e-4));
  }
  CHECK_THROWS_AS(PotentialProfile::tabulated({{1.0, 0.0}, {0.5, 1.0}, {2.0, 1.0}}), ModelError);
}

TEST_CASE("hessian continuity at the horizon") {
  const ContinuityProbe p = probe_hessian_continuity(builtin_model("SCHW3").model);
  CHECK(p.continuous);
  const HessianOverF lim = hessian_over_f_horizon_limits(builtin_model("SCHW3").model);
  // f² = 1 − 1/s: ½(f²)″(1) = −1, k/s0 = 1/2.
  CHECK(lim.radial == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(lim.tangential == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("montiel potential is a conformal potential") {
  for (const auto& e : builtin_catalogue()) {
    CAPTURE(e.model.name());
    CHECK(montiel_potential_residual(e.model) < 1e-8);
  }
  // A wrong φ′ is detected.
  const auto m = builtin_model("SCHW3").model;
  CHECK(montiel_potential_residual(m, {}, [](double s) { return s; }) > 1e-3);
}

TEST_CASE("product case check") {
  // f = cos r on the round cylinder of S^2: f̈ + c f = 0.
  CHECK(cylinder_substatic_check([](double r) { return std::cos(r); }, 1.0, 3, {0.0, 1.0, 200}));
  CHECK_FALSE(cylinder_substatic_check([](double r) { return std::cosh(r) - 3.0 * r * r; }, 1.0, 3,
                                       {0.0, 1.0, 200}));
}

TEST_CASE("domain errors") {
  const auto m = builtin_model("SCHW3").model;
  CHECK_THROWS_AS(m.squared(5.0), DomainError);
  CHECK_THROWS_AS(m.squared(0.5), DomainError);
  CHECK(unit_sphere_volume(2) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(unit_sphere_volume(1) == doctest::Approx(2.0 * std::numbers::pi));
}
