#include "substatic/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "substatic/errors.hpp"
#include "substatic/functionals.hpp"

namespace substatic {
namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kAbsTol = 1e-13;
constexpr double kRelTol = 1e-12;

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

}  // namespace

double q_functional(const WarpedProductModel& model, const RadialGraph& graph) {
  const SurfaceQuadrature q = surface_quadrature(model, graph);
  if (!(q.min_mean_curvature() > 0.0)) {
    throw MeanConvexityError(fmt::format("H = {:.6g} ≤ 0 on the surface", q.min_mean_curvature()));
  }
  return q.integrate([](const SurfacePoint& p) { return p.f / p.mean_curvature; });
}

RadialStep flow_step_radial(const WarpedProductModel& model, double s, double dt) {
  if (dt < 0.0) {
    throw DomainError("flow step must be nonnegative");
  }
  if (!(s > model.s_min()) || s > model.s_max() * (1.0 + 1e-12)) {
    throw DomainError(fmt::format("radius {} outside the model domain", s));
  }
  if (dt == 0.0) {
    return {s, false};
  }
  const double s0 = model.s_min();
  std::array<double, 1> y{s - s0};
  auto rhs = [&model](const std::array<double, 1>& x, std::array<double, 1>& dxdt, double) {
    const double yy = std::max(x[0], 0.0);
    dxdt[0] = -model.squared_near_horizon(yy).value;
  };
  auto stepper = odeint::make_controlled(kAbsTol * s, kRelTol,
                                         odeint::runge_kutta_dopri5<std::array<double, 1>>());
  odeint::integrate_adaptive(stepper, rhs, y, 0.0, dt, dt);
  RadialStep out{s0 + y[0], false};
  const double floor = 1e-14 * std::max(1.0, s0);
  if (!(y[0] > floor)) {
    out.s = s0 + floor;
    out.clamped = true;
  }
  return out;
}

double graph_step_cap(const WarpedProductModel& model, const RadialGraph& graph) {
  double rate = 0.0;
  for (double u : graph.values()) {
    rate = std::max(rate, std::sqrt(std::max(model.squared(u).value, 0.0)) / u);
  }
  const double spacing = std::numbers::pi / static_cast<double>(graph.intervals());
  return rate > 0.0 ? 0.5 * spacing / rate : std::numeric_limits<double>::infinity();
}

RadialGraph flow_step_graph(const WarpedProductModel& model, const RadialGraph& graph, double dt,
                            Execution exec) {
  if (dt < 0.0) {
    throw DomainError("flow step must be nonnegative");
  }
  if (dt == 0.0) {
    return graph;
  }
  const Eigen::MatrixXd& d1 = graph.discretization().series().d1();
  const std::size_t m = graph.size();
  std::vector<double> du(m);
  auto rhs = [&](const std::vector<double>& u, std::vector<double>& dudt, double) {
    Eigen::Map<Eigen::VectorXd>(du.data(), static_cast<Eigen::Index>(m)) = d1 * centered(as_vector(u));
    for (double v : u) {
      if (!(v > model.s_min())) {
        throw GraphError("graph reached the horizon during a flow step");
      }
    }
    if (exec == Execution::serial) {
      kernels::flow_velocity_serial(model, u, du, dudt);
    } else {
      kernels::flow_velocity_parallel(model, u, du, dudt);
    }
  };
  const double cap = graph_step_cap(model, graph);
  const auto pieces = static_cast<std::size_t>(std::ceil(dt / cap));
  const double h = dt / static_cast<double>(std::max<std::size_t>(pieces, 1));
  std::vector<double> u = graph.values();
  const double scale = graph.max_value();
  auto stepper = odeint::make_controlled(kAbsTol * scale, kRelTol,
                                         odeint::runge_kutta_dopri5<std::vector<double>>());
  odeint::integrate_adaptive(stepper, rhs, u, 0.0, dt, h);
  for (double v : u) {
    if (!std::isfinite(v)) {
      throw GraphError("flow produced non-finite graph values");
    }
  }
  RadialGraph out = RadialGraph::from_values(model, std::move(u));
  check_graph_resolved(out);
  return out;
}

FlowDiagnostics flow_diagnostics(const WarpedProductModel& model, const RadialGraph& graph,
                                 Execution exec) {
  const double n = static_cast<double>(model.n());
  const SurfaceQuadrature q = surface_quadrature(model, graph, exec);
  FlowDiagnostics d;
  d.min_h = q.min_mean_curvature();
  if (!(d.min_h > 0.0)) {
    throw MeanConvexityError(fmt::format("H = {:.6g} ≤ 0 along the flow", d.min_h));
  }
  d.q = q.integrate([](const SurfacePoint& p) { return p.f / p.mean_curvature; }, exec);
  const double f2_integral = q.integrate([](const SurfacePoint& p) { return p.f * p.f; }, exec);
  const double remainder = q.integrate(
      [](const SurfacePoint& p) {
        const double r = p.f / p.mean_curvature;
        return r * r * (p.umbilicity + p.substatic_nu / p.f);
      },
      exec);
  d.dqdt_formula = -n / (n - 1.0) * f2_integral - remainder;
  d.substatic_nu_min = std::numeric_limits<double>::infinity();
  double weight_sum = 0.0;
  double weighted_u = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    const SurfacePoint& p = q.points[i];
    d.umbilicity_max = std::max(d.umbilicity_max, p.umbilicity);
    d.substatic_nu_max = std::max(d.substatic_nu_max, std::abs(p.substatic_nu));
    d.substatic_nu_min = std::min(d.substatic_nu_min, p.substatic_nu);
    d.max_second_ff =
        std::max({d.max_second_ff, std::abs(p.kappa_meridian), std::abs(p.kappa_parallel)});
    const double w = q.weights[i] * std::pow(std::sin(p.theta), n - 2.0);
    weight_sum += w;
    weighted_u += w * p.s;
  }
  d.s_mean = weighted_u / weight_sum;
  d.weighted_volume = weighted_volume(model, graph);

  // Codazzi sides at the nodes.
  const CosineSeries& series = graph.discretization().series();
  const auto u = as_vector(graph.values());
  const Eigen::VectorXd du = series.d1() * centered(u);
  const Eigen::VectorXd d2u = series.d2() * centered(u);
  const std::vector<double> theta = series.nodes();
  const auto nodes = evaluate_points(model, theta, graph.values(),
                                     {du.data(), static_cast<std::size_t>(du.size())},
                                     {d2u.data(), static_cast<std::size_t>(d2u.size())}, exec);
  Eigen::VectorXd h(static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    h(static_cast<Eigen::Index>(j)) = nodes[j].mean_curvature;
  }
  const Eigen::VectorXd dh = series.d1() * centered(h);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    d.codazzi_lhs = std::max(d.codazzi_lhs,
                             std::abs(dh(static_cast<Eigen::Index>(j))) / nodes[j].tangent_length);
    d.codazzi_rhs =
        std::max(d.codazzi_rhs, (n - 2.0) / (n - 1.0) * std::abs(nodes[j].ricci_mixed));
  }
  return d;
}

FlowTrace run_flow(const WarpedProductModel& model, const RadialGraph& initial,
                   const FlowOptions& options) {
  if (!(options.dt > 0.0) || !(options.t_end >= 0.0)) {
    throw DomainError("flow needs dt > 0 and t_end ≥ 0");
  }
  FlowTrace trace;
  trace.dt = options.dt;
  trace.model = model.name();
  trace.states.push_back({0.0, initial, flow_diagnostics(model, initial, options.exec)});
  const auto steps = static_cast<std::size_t>(std::llround(options.t_end / options.dt));
  const double stop_distance = options.stop_fraction * (model.s_max() - model.s_min());
  for (std::size_t i = 1; i <= steps; ++i) {
    const RadialGraph& current = trace.states.back().graph;
    if (current.min_value() - model.s_min() < stop_distance) {
      trace.stopped_early = true;
      trace.stop_reason = "horizon proximity";
      break;
    }
    try {
      RadialGraph next = flow_step_graph(model, current, options.dt, options.exec);
      FlowDiagnostics diag = flow_diagnostics(model, next, options.exec);
      trace.states.push_back(
          {static_cast<double>(i) * options.dt, std::move(next), diag});
    } catch (const GraphError& e) {
      trace.stopped_early = true;
      trace.stop_reason = std::string("loss of graph: ") + e.what();
      break;
    } catch (const MeanConvexityError& e) {
      trace.stopped_early = true;
      trace.stop_reason = std::string("mean convexity lost: ") + e.what();
      break;
    }
  }
  return trace;
}

std::vector<double> numeric_q_derivative(const FlowTrace& trace) {
  const std::size_t m = trace.states.size();
  std::vector<double> out(m, std::numeric_limits<double>::quiet_NaN());
  auto q = [&](std::size_t i) { return trace.states[i].diagnostics.q; };
  auto t = [&](std::size_t i) { return trace.states[i].t; };
  // Fourth-order stencils when the samples are uniform, centered second order otherwise.
  bool uniform = m >= 5;
  const double h = m >= 2 ? t(1) - t(0) : 0.0;
  for (std::size_t i = 1; uniform && i < m; ++i) {
    uniform = std::abs(t(i) - t(i - 1) - h) <= 1e-9 * std::abs(h);
  }
  for (std::size_t i = 1; i + 1 < m; ++i) {
    if (!uniform) {
      out[i] = (q(i + 1) - q(i - 1)) / (t(i + 1) - t(i - 1));
    } else if (i == 1) {
      out[i] = (-3.0 * q(0) - 10.0 * q(1) + 18.0 * q(2) - 6.0 * q(3) + q(4)) / (12.0 * h);
    } else if (i + 2 == m) {
      out[i] = (3.0 * q(i + 1) + 10.0 * q(i) - 18.0 * q(i - 1) + 6.0 * q(i - 2) - q(i - 3)) /
               (12.0 * h);
    } else {
      out[i] = (q(i - 2) - 8.0 * q(i - 1) + 8.0 * q(i + 1) - q(i + 2)) / (12.0 * h);
    }
  }
  return out;
}

namespace {

double residual_impl(const FlowTrace& trace, bool relative) {
  const std::vector<double> numeric = numeric_q_derivative(trace);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < trace.states.size(); ++i) {
    const double formula = trace.states[i].diagnostics.dqdt_formula;
    const double denom = relative ? std::abs(formula) : 1.0 + std::abs(formula);
    worst = std::max(worst, std::abs(numeric[i] - formula) / denom);
  }
  return worst;
}

}  // namespace

double q_prime_residual(const FlowTrace& trace) { return residual_impl(trace, false); }
double q_prime_relative_residual(const FlowTrace& trace) { return residual_impl(trace, true); }

MonotonicityReport monotonicity_report(const FlowTrace& trace, const WarpedProductModel& model,
                                       double tol) {
  MonotonicityReport r;
  r.max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < trace.states.size(); ++i) {
    const double q0 = trace.states[i].diagnostics.q;
    const double inc = trace.states[i + 1].diagnostics.q - q0;
    r.max_increase = std::max(r.max_increase, inc);
    if (inc > tol * (1.0 + std::abs(q0))) {
      r.nonincreasing = false;
    }
  }
  const double n = static_cast<double>(model.n());
  const double cn = horizon_constant_integral(model).value;
  r.limit_target = n / (n - 1.0) * cn * horizon_flux(model);
  const FlowDiagnostics& last = trace.states.back().diagnostics;
  r.limit_gap = last.q - n / (n - 1.0) * last.weighted_volume - r.limit_target;
  return r;
}

EqualityFlowDiagnostics equality_flow_diagnostics(const FlowTrace& trace) {
  EqualityFlowDiagnostics out;
  for (const auto& st : trace.states) {
    out.umbilicity_max = std::max(out.umbilicity_max, st.diagnostics.umbilicity_max);
    out.substatic_nu_max = std::max(out.substatic_nu_max, st.diagnostics.substatic_nu_max);
  }
  return out;
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
  out << "t,s_mean,Q,dQdt_numeric,dQdt_formula,umbilicity_max,substatic_nu_max,minH\n";
  const std::vector<double> numeric = numeric_q_derivative(trace);
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const auto& d = trace.states[i].diagnostics;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       trace.states[i].t, d.s_mean, d.q, numeric[i], d.dqdt_formula,
                       d.umbilicity_max, d.substatic_nu_max, d.min_h);
  }
}

}  // namespace substatic
