#include "substatic/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "substatic/errors.hpp"

namespace substatic {

SurfacePoint surface_point(const WarpedProductModel& model, double theta, double u, double du,
                           double d2u) {
  const double n = static_cast<double>(model.n());
  const SquaredPotential p = model.squared(u);
  if (!(p.value > 0.0)) {
    throw GraphError("graph touches the horizon");
  }
  const double s = u;
  const double f2 = p.value;
  const double f = std::sqrt(f2);
  const double w2 = f2 + du * du / (s * s);
  const double w = std::sqrt(w2);
  const double w3 = w2 * w;

  const double sin_t = std::sin(theta);
  // cot θ · u′, with its pole limit.
  const double cot_du = std::abs(sin_t) < 1e-12 ? d2u : std::cos(theta) / sin_t * du;

  SurfacePoint pt;
  pt.theta = theta;
  pt.s = s;
  pt.du = du;
  pt.d2u = d2u;
  pt.f = f;
  pt.tangent_length = std::sqrt(du * du / f2 + s * s);
  pt.area_density = pt.tangent_length * std::pow(s * std::abs(sin_t), n - 2.0);

  pt.mean_curvature = ((n - 1.0) * f2 / s + 0.5 * p.d1) / w -
                      f2 * (0.5 * p.d1 - du * du / (s * s * s)) / w3 -
                      ((n - 2.0) * cot_du / w + d2u * f2 / w3) / (s * s);
  pt.kappa_parallel = f2 / (s * w) - cot_du / (s * s * w);
  pt.kappa_meridian = pt.mean_curvature - (n - 2.0) * pt.kappa_parallel;
  const double split = pt.kappa_meridian - pt.kappa_parallel;
  pt.umbilicity = (n - 2.0) / (n - 1.0) * split * split;

  pt.nu_radial = f / w;
  pt.nu_angular = -du / (s * w);
  const double nr2 = pt.nu_radial * pt.nu_radial;
  const double nt2 = pt.nu_angular * pt.nu_angular;

  const double ric_radial = -(n - 1.0) * p.d1 / (2.0 * s);
  const double ric_tangential =
      ((n - 2.0) - (0.5 * s * p.d1 + (n - 2.0) * f2)) / (s * s);
  pt.ricci_nu = nr2 * ric_radial + nt2 * ric_tangential;
  pt.ricci_mixed = pt.nu_radial * pt.nu_angular * (ric_tangential - ric_radial);
  pt.hessian_nu = nr2 * 0.5 * p.d2 + nt2 * p.d1 / (2.0 * s);
  pt.laplacian_over_f = 0.5 * p.d2 + (n - 1.0) * p.d1 / (2.0 * s);
  pt.substatic_nu = f * (pt.ricci_nu - pt.hessian_nu + pt.laplacian_over_f);
  return pt;
}

namespace kernels {
namespace {

void check_sizes(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  if (a != b || a != c || a != d) {
    throw DomainError("surface kernel: mismatched input lengths");
  }
}

}  // namespace

std::vector<SurfacePoint> evaluate_serial(const WarpedProductModel& model,
                                          std::span<const double> theta, std::span<const double> u,
                                          std::span<const double> du,
                                          std::span<const double> d2u) {
  check_sizes(theta.size(), u.size(), du.size(), d2u.size());
  std::vector<SurfacePoint> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] = surface_point(model, theta[i], u[i], du[i], d2u[i]);
  }
  return out;
}

std::vector<SurfacePoint> evaluate_parallel(const WarpedProductModel& model,
                                            std::span<const double> theta,
                                            std::span<const double> u, std::span<const double> du,
                                            std::span<const double> d2u) {
  check_sizes(theta.size(), u.size(), du.size(), d2u.size());
  std::vector<SurfacePoint> out(theta.size());
  const auto count = static_cast<std::ptrdiff_t>(theta.size());
  // Exceptions cannot cross the parallel region; record the first one.
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = surface_point(model, theta[k], u[k], du[k], d2u[k]);
    } catch (const std::exception& e) {
#pragma omp critical(substatic_kernel_error)
      {
        if (!failed) {
          failed = true;
          message = e.what();
        }
      }
    }
  }
  if (failed) {
    throw GraphError(message);
  }
  return out;
}

double integrate_serial(std::span<const SurfacePoint> points, std::span<const double> weights,
                        const PointIntegrand& integrand) {
  if (points.size() != weights.size()) {
    throw DomainError("surface integral: mismatched weights");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += weights[i] * points[i].area_density * integrand(points[i]);
  }
  return sum;
}

double integrate_parallel(std::span<const SurfacePoint> points, std::span<const double> weights,
                          const PointIntegrand& integrand) {
  if (points.size() != weights.size()) {
    throw DomainError("surface integral: mismatched weights");
  }
  const auto count = static_cast<std::ptrdiff_t>(points.size());
  double sum = 0.0;
#pragma omp parallel for reduction(+ : sum) schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    sum += weights[k] * points[k].area_density * integrand(points[k]);
  }
  return sum;
}

void flow_velocity_serial(const WarpedProductModel& model, std::span<const double> u,
                          std::span<const double> du, std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double f2 = std::max(model.squared(u[i]).value, 0.0);
    out[i] = -std::sqrt(f2) * std::sqrt(f2 + du[i] * du[i] / (u[i] * u[i]));
  }
}

void flow_velocity_parallel(const WarpedProductModel& model, std::span<const double> u,
                            std::span<const double> du, std::span<double> out) {
  const auto count = static_cast<std::ptrdiff_t>(u.size());
  bool failed = false;
  std::string message;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      const double f2 = std::max(model.squared(u[k]).value, 0.0);
      out[k] = -std::sqrt(f2) * std::sqrt(f2 + du[k] * du[k] / (u[k] * u[k]));
    } catch (const std::exception& e) {
#pragma omp critical(substatic_kernel_error)
      {
        if (!failed) {
          failed = true;
          message = e.what();
        }
      }
    }
  }
  if (failed) {
    throw GraphError(message);
  }
}

}  // namespace kernels

std::vector<SurfacePoint> evaluate_points(const WarpedProductModel& model,
                                          std::span<const double> theta, std::span<const double> u,
                                          std::span<const double> du, std::span<const double> d2u,
                                          Execution exec) {
  return exec == Execution::serial ? kernels::evaluate_serial(model, theta, u, du, d2u)
                                   : kernels::evaluate_parallel(model, theta, u, du, d2u);
}

double integrate_points(std::span<const SurfacePoint> points, std::span<const double> weights,
                        const kernels::PointIntegrand& integrand, Execution exec) {
  return exec == Execution::serial ? kernels::integrate_serial(points, weights, integrand)
                                   : kernels::integrate_parallel(points, weights, integrand);
}

}  // namespace substatic
