#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "substatic/catalogue.hpp"
#include "substatic/errors.hpp"
#include "substatic/kernels.hpp"

using namespace substatic;

namespace {

struct Samples {
  std::vector<double> theta, u, du, d2u;
};

Samples random_samples(const WarpedProductModel& m, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th(0.0, 3.14159), rad(0.0, 1.0), slope(-0.3, 0.3);
  Samples s;
  for (std::size_t i = 0; i < count; ++i) {
    s.theta.push_back(th(rng));
    s.u.push_back(m.s_min() + (0.2 + 0.7 * rad(rng)) * (m.s_max() - m.s_min()));
    s.du.push_back(slope(rng));
    s.d2u.push_back(slope(rng));
  }
  return s;
}

}  // namespace

TEST_CASE("serial and parallel evaluation agree bit for bit") {
  for (const auto& e : builtin_catalogue()) {
    const Samples s = random_samples(e.model, 4097, 3);
    const auto a = kernels::evaluate_serial(e.model, s.theta, s.u, s.du, s.d2u);
    const auto b = kernels::evaluate_parallel(e.model, s.theta, s.u, s.du, s.d2u);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].mean_curvature == b[i].mean_curvature);
      CHECK(a[i].area_density == b[i].area_density);
      CHECK(a[i].umbilicity == b[i].umbilicity);
      CHECK(a[i].substatic_nu == b[i].substatic_nu);
    }
  }
}

TEST_CASE("serial and parallel reductions agree") {
  const auto m = builtin_model("SADS3").model;
  const Samples s = random_samples(m, 10000, 5);
  const auto pts = kernels::evaluate_serial(m, s.theta, s.u, s.du, s.d2u);
  std::vector<double> w(pts.size(), 1e-3);
  auto g = [](const SurfacePoint& p) { return p.f / p.mean_curvature; };
  const double a = kernels::integrate_serial(pts, w, g);
  const double b = kernels::integrate_parallel(pts, w, g);
  CHECK(b == doctest::Approx(a).epsilon(1e-13));
  CHECK(integrate_points(pts, w, g, Execution::serial) == a);
}

TEST_CASE("flow velocity kernels agree and match the formula") {
  const auto m = builtin_model("SCHW3").model;
  const Samples s = random_samples(m, 2000, 9);
  std::vector<double> a(s.u.size()), b(s.u.size());
  kernels::flow_velocity_serial(m, s.u, s.du, a);
  kernels::flow_velocity_parallel(m, s.u, s.du, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f2 = 1.0 - 1.0 / s.u[i];
    const double expect = -std::sqrt(f2) * std::sqrt(f2 + s.du[i] * s.du[i] / (s.u[i] * s.u[i]));
    CHECK(a[i] == b[i]);
    CHECK(a[i] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("principal curvatures of a coordinate sphere") {
  const auto m = builtin_model("SCHW3").model;
  const SurfacePoint p = surface_point(m, 0.7, 2.0, 0.0, 0.0);
  CHECK(p.kappa_meridian == doctest::Approx(std::sqrt(0.5) / 2.0).epsilon(1e-15));
  CHECK(p.kappa_parallel == doctest::Approx(std::sqrt(0.5) / 2.0).epsilon(1e-15));
  CHECK(p.nu_radial == doctest::Approx(1.0));
  CHECK(p.nu_angular == 0.0);
  CHECK(p.substatic_nu == doctest::Approx(0.0).epsilon(1e-15));
  // Poles use the limit of cot θ·u′.
  const SurfacePoint pole = surface_point(m, 0.0, 2.0, 0.0, 0.1);
  CHECK(std::isfinite(pole.mean_curvature));
}

TEST_CASE("parallel evaluation reports failures as GraphError") {
  const auto m = builtin_model("SCHW3").model;
  std::vector<double> th(64, 0.5), u(64, 2.0), du(64, 0.0), d2u(64, 0.0);
  u[37] = 0.5;  // inside the horizon
  CHECK_THROWS_AS(kernels::evaluate_parallel(m, th, u, du, d2u), GraphError);
  CHECK_THROWS_AS(kernels::evaluate_serial(m, th, u, du, d2u), Error);
}
