#pragma once

// Heintze–Karcher functional, the horizon constant c_N and the multi-horizon
// equality algebra.

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "substatic/hypersurface.hpp"
#include "substatic/warped_geometry.hpp"

namespace substatic {

/// (n−1)/n ∫_Σ f/H dσ. Throws MeanConvexityError if H ≤ 0 at a node or quadrature point.
double hk_lhs(const WarpedProductModel& model, const RadialGraph& graph);

/// Throws MeanConvexityError when H ≤ 0 anywhere on the graph.
void require_mean_convex(const WarpedProductModel& model, const RadialGraph& graph);

struct HorizonConstant {
  double value = 0.0;
  bool has_horizon = false;  ///< false: boundaryless model, horizon term absent
};

/// c_N = s0/(n k).
HorizonConstant horizon_constant_closed(const WarpedProductModel& model);
/// c_N = (n−1)/n · ∫|∇f| / ∫|∇f|[Δf/f − ∇∇f/f(ν_f, ν_f)], evaluated with the horizon limits.
HorizonConstant horizon_constant_integral(const WarpedProductModel& model);

/// ∫_{∂M} |∇f| dσ = k·|N|·s0^{n−1}; zero without horizon.
double horizon_flux(const WarpedProductModel& model);

struct HKOptions {
  /// Replaces the potential f by σ·f in every term (the metric is unchanged).
  double potential_scale = 1.0;
  /// Forces the horizon constant; used for injected-error controls.
  std::optional<double> cn_override;
};

struct HKReport {
  double lhs = 0.0;
  double weighted_volume = 0.0;
  double horizon_term = 0.0;
  double deficit = 0.0;
  double cn = 0.0;
  bool has_horizon = false;
  double scale = 0.0;  ///< magnitude used for relative tolerances (= lhs)
  std::string model;
  std::uint64_t graph_hash = 0;
};

HKReport hk_deficit(const WarpedProductModel& model, const RadialGraph& graph,
                    const HKOptions& options = {});

nlohmann::json to_json(const HKReport& report);

struct CmcCheck {
  bool pass = false;
  bool cmc = false;       ///< false: the check is vacuous and passes
  double h_spread = 0.0;  ///< max |H − mean H| over the nodes
  double deficit = 0.0;
};

/// CMC hypersurfaces must attain equality. `tol_h` is relative to mean H,
/// `tol` relative to the report scale.
CmcCheck minkowski_cmc_check(const WarpedProductModel& model, const RadialGraph& graph,
                             const HKOptions& options = {}, double tol_h = 1e-8,
                             double tol = 1e-9);

struct HorizonComponent {
  double k = 0.0;
  double s0 = 0.0;
  double volume = 0.0;
};

struct MultiHorizonResult {
  bool holds = false;
  double gap = 0.0;  ///< (Σ k²/s0 |N|)(Σ s0 |N|) − (Σ k |N|)² ≥ 0
};

/// The gap is evaluated through the Lagrange form ½ ΣΣ w_i w_j (β_i − β_j)²,
/// w = s0·|N|, β = k/s0, which is nonnegative term by term.
MultiHorizonResult multi_horizon_equality_check(std::span<const HorizonComponent> components,
                                                double tol = 1e-12);

}  // namespace substatic
