#pragma once

// Normal flow with g-speed f toward the horizon, realized as the graph
// evolution ∂_t u = −f(u)·√(f(u)² + u′²/u²), and the diagnostics of the
// monotone quantity Q(t) = ∫ f/H dσ along it.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "substatic/hypersurface.hpp"
#include "substatic/warped_geometry.hpp"

namespace substatic {

/// ∫_Σ f/H dσ; throws MeanConvexityError when H ≤ 0.
double q_functional(const WarpedProductModel& model, const RadialGraph& graph);

struct RadialStep {
  double s = 0.0;
  bool clamped = false;  ///< the step reached the horizon and was stopped just outside it
};

/// One adaptive Dormand–Prince step of ds/dt = −f(s)², integrated in s − s0.
RadialStep flow_step_radial(const WarpedProductModel& model, double s, double dt);

/// Largest stable sub-step for the graph equation at the given resolution.
double graph_step_cap(const WarpedProductModel& model, const RadialGraph& graph);

/// Advances the graph by dt (adaptive Dormand–Prince, sub-stepped under the
/// characteristic cap). Throws GraphError on loss of the graph property.
RadialGraph flow_step_graph(const WarpedProductModel& model, const RadialGraph& graph, double dt,
                            Execution exec = Execution::parallel);

struct FlowDiagnostics {
  double q = 0.0;
  double dqdt_formula = 0.0;
  double umbilicity_max = 0.0;
  double substatic_nu_max = 0.0;  ///< max |[f Ric − ∇∇f + Δf g](ν, ν)|
  double substatic_nu_min = 0.0;
  double min_h = 0.0;
  double max_second_ff = 0.0;
  double s_mean = 0.0;
  double weighted_volume = 0.0;
  double codazzi_lhs = 0.0;  ///< max |∇_τ H|
  double codazzi_rhs = 0.0;  ///< max (n−2)/(n−1)|Ric(τ, ν)|
};

FlowDiagnostics flow_diagnostics(const WarpedProductModel& model, const RadialGraph& graph,
                                 Execution exec = Execution::parallel);

struct FlowState {
  double t = 0.0;
  RadialGraph graph;
  FlowDiagnostics diagnostics;
};

struct FlowOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  /// Stop when min u − s0 < stop_fraction·(s_max − s0).
  double stop_fraction = 1e-4;
  Execution exec = Execution::parallel;
};

struct FlowTrace {
  std::vector<FlowState> states;
  double dt = 0.0;
  std::string model;
  bool stopped_early = false;
  std::string stop_reason;
};

FlowTrace run_flow(const WarpedProductModel& model, const RadialGraph& initial,
                   const FlowOptions& options);

/// Finite-difference dQ/dt at interior states (NaN at the ends); fourth order on
/// uniformly spaced traces.
std::vector<double> numeric_q_derivative(const FlowTrace& trace);

/// max over interior states of |numeric dQ/dt − formula| / (1 + |formula|).
double q_prime_residual(const FlowTrace& trace);
/// Same with |formula| in the denominator.
double q_prime_relative_residual(const FlowTrace& trace);

struct MonotonicityReport {
  bool nonincreasing = true;
  double max_increase = 0.0;  ///< largest Q(t_{i+1}) − Q(t_i)
  double limit_gap = 0.0;     ///< Q(t_end) − n/(n−1)[∫_Ω f + c_N ∫|∇f|]
  double limit_target = 0.0;  ///< n/(n−1) c_N ∫|∇f|
};

MonotonicityReport monotonicity_report(const FlowTrace& trace, const WarpedProductModel& model,
                                       double tol = 1e-10);

struct EqualityFlowDiagnostics {
  double umbilicity_max = 0.0;
  double substatic_nu_max = 0.0;
};
EqualityFlowDiagnostics equality_flow_diagnostics(const FlowTrace& trace);

/// Columns t,s_mean,Q,dQdt_numeric,dQdt_formula,umbilicity_max,substatic_nu_max,minH.
void write_trace_csv(std::ostream& out, const FlowTrace& trace);

}  // namespace substatic
