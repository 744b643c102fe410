#include "substatic/hypersurface.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "substatic/errors.hpp"

namespace substatic {
namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

RadialGraph RadialGraph::from_values(const WarpedProductModel& model, std::vector<double> values) {
  if (values.size() < 3) {
    throw DomainError("radial graph needs at least 3 nodes");
  }
  const double lo = model.s_min();
  const double hi = model.s_max() * (1.0 + 1e-12);
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double v = values[j];
    if (!std::isfinite(v) || v <= lo || v > hi) {
      throw DomainError(fmt::format("graph value u[{}] = {} outside ({}, {}]", j, v, lo,
                                    model.s_max()));
    }
  }
  auto disc = angular_discretization(values.size() - 1);
  return RadialGraph(std::move(values), std::move(disc));
}

std::vector<double> RadialGraph::nodes() const { return disc_->series().nodes(); }

std::vector<double> RadialGraph::coefficients() const {
  return disc_->series().coefficients(u_);
}

SeriesValue RadialGraph::evaluate(double theta) const {
  return disc_->series().evaluate(coefficients(), theta);
}

double RadialGraph::min_value() const { return *std::min_element(u_.begin(), u_.end()); }
double RadialGraph::max_value() const { return *std::max_element(u_.begin(), u_.end()); }

bool RadialGraph::is_constant(double tol) const {
  return max_value() - min_value() <= tol * std::max(1.0, std::abs(u_.front()));
}

RadialGraph sphere_graph(const WarpedProductModel& model, double s_hat, std::size_t node_count) {
  if (!(s_hat > model.s_min()) || s_hat > model.s_max()) {
    throw DomainError(fmt::format("sphere radius {} outside ({}, {}]", s_hat, model.s_min(),
                                  model.s_max()));
  }
  return RadialGraph::from_values(model, std::vector<double>(node_count, s_hat));
}

RadialGraph perturbed_graph(const WarpedProductModel& model, double s_hat,
                            std::span<const Perturbation> terms, std::size_t node_count) {
  std::vector<Perturbation> copy(terms.begin(), terms.end());
  return graph_from_function(
      model,
      [s_hat, copy](double th) {
        double u = s_hat;
        for (const auto& p : copy) {
          u += p.amplitude * std::cos(static_cast<double>(p.mode) * th);
        }
        return u;
      },
      node_count);
}

RadialGraph graph_from_function(const WarpedProductModel& model,
                                const std::function<double(double)>& u, std::size_t node_count) {
  if (node_count < 3) {
    throw DomainError("radial graph needs at least 3 nodes");
  }
  std::vector<double> values(node_count);
  const double nn = static_cast<double>(node_count - 1);
  for (std::size_t j = 0; j < node_count; ++j) {
    values[j] = u(std::numbers::pi * static_cast<double>(j) / nn);
  }
  return RadialGraph::from_values(model, std::move(values));
}

std::vector<Perturbation> random_perturbation(std::mt19937_64& rng, double max_amplitude,
                                              int max_mode) {
  std::uniform_int_distribution<int> count_dist(1, 3);
  std::uniform_int_distribution<int> mode_dist(1, max_mode);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> total(0.1 * max_amplitude, max_amplitude);
  const int count = count_dist(rng);
  std::vector<Perturbation> terms;
  double norm = 0.0;
  for (int i = 0; i < count; ++i) {
    Perturbation p{coeff(rng), mode_dist(rng)};
    norm += std::abs(p.amplitude);
    terms.push_back(p);
  }
  const double scale = total(rng) / norm;
  for (auto& p : terms) {
    p.amplitude *= scale;
  }
  return terms;
}

void check_graph_resolved(const RadialGraph& graph) {
  const std::vector<double> c = graph.coefficients();
  const std::size_t start = c.size() - c.size() / 4;
  double tail = 0.0;
  for (std::size_t k = start; k < c.size(); ++k) {
    tail = std::max(tail, std::abs(c[k]));
  }
  const double size = std::max(std::abs(graph.max_value()), std::abs(graph.min_value()));
  if (tail > 1e-3 * size) {
    throw GraphError(fmt::format("graph not resolved: spectral tail {:.3g} exceeds 1e-3 of |u|",
                                 tail));
  }
}

SurfaceGeometry graph_geometry(const WarpedProductModel& model, const RadialGraph& graph,
                               Execution exec) {
  check_graph_resolved(graph);
  const CosineSeries& series = graph.discretization().series();
  const auto u = as_vector(graph.values());
  const std::vector<double> du = to_std(series.d1() * centered(u));
  const std::vector<double> d2u = to_std(series.d2() * centered(u));
  const std::vector<double> theta = series.nodes();
  const auto pts = evaluate_points(model, theta, graph.values(), du, d2u, exec);

  SurfaceGeometry g;
  g.theta = theta;
  g.u = graph.values();
  for (const auto& p : pts) {
    g.area_density.push_back(p.area_density);
    g.mean_curvature.push_back(p.mean_curvature);
    g.traceless_defect.push_back(p.umbilicity);
    g.normal_radial.push_back(p.nu_radial);
    g.normal_angular.push_back(p.nu_angular);
    g.f_on_surface.push_back(p.f);
  }
  return g;
}

double SurfaceQuadrature::integrate(const kernels::PointIntegrand& g, Execution exec) const {
  return integrate_points(points, weights, g, exec);
}

double SurfaceQuadrature::min_mean_curvature() const {
  double v = points.front().mean_curvature;
  for (const auto& p : points) {
    v = std::min(v, p.mean_curvature);
  }
  return v;
}

double SurfaceQuadrature::max_mean_curvature() const {
  double v = points.front().mean_curvature;
  for (const auto& p : points) {
    v = std::max(v, p.mean_curvature);
  }
  return v;
}

SurfaceQuadrature surface_quadrature(const WarpedProductModel& model, const RadialGraph& graph,
                                     Execution exec) {
  const AngularDiscretization& disc = graph.discretization();
  const auto u = as_vector(graph.values());
  const std::vector<double> uq = to_std(disc.value_at_points() * u);
  const std::vector<double> duq = to_std(disc.d1_at_points() * centered(u));
  const std::vector<double> d2uq = to_std(disc.d2_at_points() * centered(u));
  SurfaceQuadrature q;
  q.points = evaluate_points(model, disc.rule().nodes, uq, duq, d2uq, exec);
  const double factor = unit_sphere_volume(model.n() - 2);
  q.weights = disc.rule().weights;
  for (double& w : q.weights) {
    w *= factor;
  }
  return q;
}

double area(const WarpedProductModel& model, const RadialGraph& graph) {
  return surface_quadrature(model, graph).integrate([](const SurfacePoint&) { return 1.0; });
}

double weighted_volume(const WarpedProductModel& model, const RadialGraph& graph) {
  // The volume density σ^{n−1}/f of g times the weight f integrates to σ^n/n.
  const AngularDiscretization& disc = graph.discretization();
  const Eigen::VectorXd uq = disc.value_at_points() * as_vector(graph.values());
  const int n = model.n();
  const double nn = static_cast<double>(n);
  const double inner = std::pow(model.s_min(), nn);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < uq.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double th = disc.rule().nodes[k];
    sum += disc.rule().weights[k] * std::pow(std::sin(th), nn - 2.0) *
           (std::pow(uq(i), nn) - inner) / nn;
  }
  return sum * unit_sphere_volume(n - 2);
}

double mean_curvature_fd_check(const WarpedProductModel& model, const RadialGraph& graph,
                               const std::function<double(double)>& bump) {
  const SurfaceQuadrature q = surface_quadrature(model, graph);
  const double first_variation =
      q.integrate([&bump](const SurfacePoint& p) { return p.mean_curvature * bump(p.theta); });

  // Normal displacement ε·φ·ν moves the graph by δu = ε·φ·W, W = √(f² + u′²/u²).
  const CosineSeries& series = graph.discretization().series();
  const auto u = as_vector(graph.values());
  const Eigen::VectorXd du = series.d1() * centered(u);
  const std::vector<double> theta = series.nodes();
  std::vector<double> shift(graph.size());
  for (std::size_t j = 0; j < graph.size(); ++j) {
    const double s = graph.values()[j];
    const double d = du(static_cast<Eigen::Index>(j));
    const double w = std::sqrt(model.squared(s).value + d * d / (s * s));
    shift[j] = bump(theta[j]) * w;
  }
  const double eps = 1e-5;
  auto moved = [&](double sign) {
    std::vector<double> v = graph.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] += sign * eps * shift[j];
    }
    return area(model, RadialGraph::from_values(model, std::move(v)));
  };
  const double fd = (moved(1.0) - moved(-1.0)) / (2.0 * eps);
  return std::abs(fd - first_variation) / std::abs(first_variation);
}

void write_graph_csv(std::ostream& out, const RadialGraph& graph) {
  out << "theta,u\n";
  const std::vector<double> theta = graph.nodes();
  for (std::size_t j = 0; j < graph.size(); ++j) {
    out << fmt::format("{:.17g},{:.17g}\n", theta[j], graph.values()[j]);
  }
}

std::uint64_t graph_hash(const RadialGraph& graph) {
  std::uint64_t h = 14695981039346656037ULL;
  for (double v : graph.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

}  // namespace substatic
