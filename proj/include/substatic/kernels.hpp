#pragma once

// Pointwise extrinsic geometry of axisymmetric radial graphs s = u(θ) and the
// data-parallel loops over sample points. Each loop has a serial reference
// version kept for testing and an OpenMP version used by default.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "substatic/warped_geometry.hpp"

namespace substatic {

enum class Execution { serial, parallel };

/// Everything the functionals and the flow need at one point of the graph.
struct SurfacePoint {
  double theta = 0.0;
  double s = 0.0;  ///< u(θ)
  double du = 0.0;
  double d2u = 0.0;
  double f = 0.0;
  double area_density = 0.0;  ///< √(u′²/f² + u²)·(u sin θ)^{n−2}
  double mean_curvature = 0.0;
  double kappa_meridian = 0.0;
  double kappa_parallel = 0.0;
  double umbilicity = 0.0;  ///< |h̊|²
  double nu_radial = 0.0;   ///< ν on the unit radial vector
  double nu_angular = 0.0;  ///< ν on the unit meridian vector
  double tangent_length = 0.0;
  double ricci_nu = 0.0;
  double hessian_nu = 0.0;  ///< (∇∇f/f)(ν, ν)
  double laplacian_over_f = 0.0;
  double substatic_nu = 0.0;  ///< [f Ric − ∇∇f + Δf g](ν, ν)
  double ricci_mixed = 0.0;   ///< Ric(e_θ, ν) with e_θ the unit meridian tangent
};

/// Geometry at one point. The cross-section is the round sphere S^{n−1}; at the
/// poles cot θ·u′ is replaced by its limit u″.
SurfacePoint surface_point(const WarpedProductModel& model, double theta, double u, double du,
                           double d2u);

namespace kernels {

std::vector<SurfacePoint> evaluate_serial(const WarpedProductModel& model,
                                          std::span<const double> theta, std::span<const double> u,
                                          std::span<const double> du,
                                          std::span<const double> d2u);
std::vector<SurfacePoint> evaluate_parallel(const WarpedProductModel& model,
                                            std::span<const double> theta,
                                            std::span<const double> u, std::span<const double> du,
                                            std::span<const double> d2u);

using PointIntegrand = std::function<double(const SurfacePoint&)>;

double integrate_serial(std::span<const SurfacePoint> points, std::span<const double> weights,
                        const PointIntegrand& integrand);
double integrate_parallel(std::span<const SurfacePoint> points, std::span<const double> weights,
                          const PointIntegrand& integrand);

/// Graph-flow velocity ∂_t u = −f(u)·√(f(u)² + u′²/u²) at every node.
void flow_velocity_serial(const WarpedProductModel& model, std::span<const double> u,
                          std::span<const double> du, std::span<double> out);
void flow_velocity_parallel(const WarpedProductModel& model, std::span<const double> u,
                            std::span<const double> du, std::span<double> out);

}  // namespace kernels

std::vector<SurfacePoint> evaluate_points(const WarpedProductModel& model,
                                          std::span<const double> theta, std::span<const double> u,
                                          std::span<const double> du, std::span<const double> d2u,
                                          Execution exec = Execution::parallel);
double integrate_points(std::span<const SurfacePoint> points, std::span<const double> weights,
                        const kernels::PointIntegrand& integrand,
                        Execution exec = Execution::parallel);

}  // namespace substatic
