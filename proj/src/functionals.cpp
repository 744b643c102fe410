#include "substatic/functionals.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "substatic/errors.hpp"

namespace substatic {

void require_mean_convex(const WarpedProductModel& model, const RadialGraph& graph) {
  const SurfaceGeometry geo = graph_geometry(model, graph);
  const auto it = std::min_element(geo.mean_curvature.begin(), geo.mean_curvature.end());
  if (!(*it > 0.0)) {
    const auto j = static_cast<std::size_t>(it - geo.mean_curvature.begin());
    throw MeanConvexityError(
        fmt::format("H = {:.6g} ≤ 0 at θ = {:.6g}", *it, geo.theta[j]));
  }
}

namespace {

double lhs_from_quadrature(const WarpedProductModel& model, const SurfaceQuadrature& q) {
  const double n = static_cast<double>(model.n());
  if (!(q.min_mean_curvature() > 0.0)) {
    throw MeanConvexityError(
        fmt::format("H = {:.6g} ≤ 0 on the surface", q.min_mean_curvature()));
  }
  return (n - 1.0) / n * q.integrate([](const SurfacePoint& p) { return p.f / p.mean_curvature; });
}

}  // namespace

double hk_lhs(const WarpedProductModel& model, const RadialGraph& graph) {
  require_mean_convex(model, graph);
  return lhs_from_quadrature(model, surface_quadrature(model, graph));
}

HorizonConstant horizon_constant_closed(const WarpedProductModel& model) {
  if (!model.has_horizon()) {
    return {0.0, false};
  }
  const double s0 = *model.horizon();
  return {s0 / (static_cast<double>(model.n()) * surface_gravity(model)), true};
}

double horizon_flux(const WarpedProductModel& model) {
  if (!model.has_horizon()) {
    return 0.0;
  }
  const double s0 = *model.horizon();
  return surface_gravity(model) * model.cross_volume() *
         std::pow(s0, static_cast<double>(model.n() - 1));
}

HorizonConstant horizon_constant_integral(const WarpedProductModel& model) {
  if (!model.has_horizon()) {
    return {0.0, false};
  }
  const double s0 = *model.horizon();
  const double n = static_cast<double>(model.n());
  // |∇f| is constant on the horizon, so both integrals reduce to the flux.
  const double bracket =
      laplacian_f_over_f(model, s0) - hessian_over_f_horizon_limits(model).radial;
  if (!(bracket > 0.0)) {
    throw ModelError(fmt::format("horizon bracket Δf/f − ∇∇f/f(ν,ν) = {:.6g} is not positive",
                                 bracket));
  }
  const double flux = horizon_flux(model);
  return {(n - 1.0) / n * flux / (flux * bracket), true};
}

HKReport hk_deficit(const WarpedProductModel& model, const RadialGraph& graph,
                    const HKOptions& options) {
  require_mean_convex(model, graph);
  const double sigma = options.potential_scale;
  if (!(sigma > 0.0)) {
    throw DomainError("potential scale must be positive");
  }
  HKReport r;
  r.model = model.name();
  r.graph_hash = graph_hash(graph);
  r.lhs = sigma * lhs_from_quadrature(model, surface_quadrature(model, graph));
  r.weighted_volume = sigma * weighted_volume(model, graph);
  const HorizonConstant cn = horizon_constant_integral(model);
  r.has_horizon = cn.has_horizon;
  r.cn = options.cn_override.value_or(cn.value);
  r.horizon_term = r.has_horizon ? r.cn * sigma * horizon_flux(model) : 0.0;
  r.deficit = r.lhs - r.weighted_volume - r.horizon_term;
  r.scale = std::abs(r.lhs);
  return r;
}

nlohmann::json to_json(const HKReport& report) {
  return {{"lhs", report.lhs},
          {"volume", report.weighted_volume},
          {"horizon", report.horizon_term},
          {"deficit", report.deficit},
          {"cn", report.cn},
          {"model", report.model},
          {"graph_hash", fmt::format("{:016x}", report.graph_hash)}};
}

CmcCheck minkowski_cmc_check(const WarpedProductModel& model, const RadialGraph& graph,
                             const HKOptions& options, double tol_h, double tol) {
  const SurfaceGeometry geo = graph_geometry(model, graph);
  double mean = 0.0;
  for (double h : geo.mean_curvature) {
    mean += h;
  }
  mean /= static_cast<double>(geo.mean_curvature.size());
  CmcCheck out;
  for (double h : geo.mean_curvature) {
    out.h_spread = std::max(out.h_spread, std::abs(h - mean));
  }
  out.cmc = out.h_spread < tol_h * std::abs(mean);
  const HKReport r = hk_deficit(model, graph, options);
  out.deficit = r.deficit;
  out.pass = !out.cmc || std::abs(r.deficit) < tol * r.scale;
  return out;
}

MultiHorizonResult multi_horizon_equality_check(std::span<const HorizonComponent> components,
                                                double tol) {
  for (const auto& c : components) {
    if (!(c.k > 0.0) || !(c.s0 > 0.0) || !(c.volume > 0.0)) {
      throw DomainError("multi-horizon data must be positive");
    }
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& a = components[i];
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      const auto& b = components[j];
      const double d = a.k / a.s0 - b.k / b.s0;
      gap += a.s0 * a.volume * b.s0 * b.volume * d * d;
    }
  }
  return {gap < tol, gap};
}

}  // namespace substatic
