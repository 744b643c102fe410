#pragma once

// Radial torsion problem Δu = −1 + (Δf/f)·u between the horizon and a
// coordinate sphere {s = ŝ}, plus the structural checks of its equality case.
//
// With a horizon, the unknown lives on x = √((s − s0)/(ŝ − s0)) ∈ [0, 1]. Both
// homogeneous solutions of the degenerate equation are smooth in x, so the
// two Dirichlet data u(s0) = c_N and u(ŝ) = 0 determine a unique solution,
// solved by Chebyshev collocation. Without a horizon the center is a regular
// point and x = s²/ŝ² is used with a single Dirichlet datum at x = 1.

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "substatic/spectral.hpp"
#include "substatic/warped_geometry.hpp"

namespace substatic {

enum class HorizonCondition {
  /// u(s0) = datum (c_N unless overridden).
  dirichlet,
  /// u bounded with du/ds finite at s0: the smooth branch, u(s0) left free.
  regular,
};

struct TorsionOptions {
  std::size_t grid_size = 48;  ///< collocation intervals
  std::optional<double> horizon_datum;
  HorizonCondition horizon = HorizonCondition::dirichlet;
  double residual_tol = 1e-8;
};

enum class TorsionMapping { horizon_sqrt, center_square };

struct TorsionSolution {
  std::string model;
  TorsionMapping mapping = TorsionMapping::horizon_sqrt;
  double s_inner = 0.0;  ///< s0, or 0 at a center
  double s_hat = 0.0;
  double datum = 0.0;    ///< u at the inner end
  std::vector<double> x;
  std::vector<double> s;
  std::vector<double> u;
  std::vector<double> du_ds;  ///< ±inf at the horizon when the slope diverges
  double residual = 0.0;      ///< torsion_residual at solve time
  bool flagged = false;       ///< residual above the requested tolerance
};

TorsionSolution solve_torsion_radial(const WarpedProductModel& model, double s_hat,
                                     const TorsionOptions& options = {});

/// u, du/ds, d²u/ds² of the collocation interpolant at s.
struct TorsionValue {
  double u = 0.0;
  double du_ds = 0.0;
  double d2u_ds2 = 0.0;
};
TorsionValue evaluate_torsion(const TorsionSolution& sol, double s);

/// du/ds at the inner end: finite for the smooth branch, ±inf otherwise.
double inner_slope(const TorsionSolution& sol);

/// Max |f²u″ + (f f′ + (n−1)f²/s)u′ − (Δf/f)u + 1| at interior points of a
/// grid with twice the collocation intervals.
double torsion_residual(const WarpedProductModel& model, const TorsionSolution& sol);

/// Max over the same points of the traceless part of
/// ∇∇u − u ∇∇f/f (only the radial/tangential split is independent).
double conformal_hessian_residual(const WarpedProductModel& model, const TorsionSolution& sol);

/// True iff du/ds(ŝ) < −tol.
bool hopf_check(const TorsionSolution& sol, double tol = 1e-12);

/// Minimum of u at interior points of the refined grid.
double torsion_interior_min(const TorsionSolution& sol);

/// True iff φ = u/f is strictly monotone on the open interval.
bool conformal_split_monotone(const WarpedProductModel& model, const TorsionSolution& sol);

/// Horizon datum minimizing conformal_hessian_residual on [lo, hi] (Brent).
double recover_horizon_datum(const WarpedProductModel& model, double s_hat, double lo, double hi,
                             std::size_t grid_size = 48);

/// Columns s,u,du_ds,residual.
void write_torsion_csv(std::ostream& out, const WarpedProductModel& model,
                       const TorsionSolution& sol);

}  // namespace substatic
