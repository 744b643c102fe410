#pragma once

// Axisymmetric radial graphs s = u(θ) over the round cross-section and their
// extrinsic geometry. Nodal values live on θ_j = πj/N and are represented by
// an even cosine series, so u′(0) = u′(π) = 0 holds by construction. Surface
// integrals use Gauss–Legendre points in θ times |S^{n−2}|.
//
// Orientation: ν points away from the horizon, so coordinate spheres have H > 0.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "substatic/kernels.hpp"
#include "substatic/spectral.hpp"
#include "substatic/warped_geometry.hpp"

namespace substatic {

class RadialGraph {
 public:
  /// Validates s0 < u ≤ s_max at every node and the node count (≥ 3).
  static RadialGraph from_values(const WarpedProductModel& model, std::vector<double> values);

  [[nodiscard]] const std::vector<double>& values() const { return u_; }
  [[nodiscard]] std::size_t size() const { return u_.size(); }
  [[nodiscard]] std::size_t intervals() const { return u_.size() - 1; }
  [[nodiscard]] std::vector<double> nodes() const;
  [[nodiscard]] const AngularDiscretization& discretization() const { return *disc_; }

  /// Cosine coefficients of u.
  [[nodiscard]] std::vector<double> coefficients() const;
  /// u, u′, u″ at any θ.
  [[nodiscard]] SeriesValue evaluate(double theta) const;
  [[nodiscard]] double min_value() const;
  [[nodiscard]] double max_value() const;
  [[nodiscard]] bool is_constant(double tol = 1e-14) const;

 private:
  RadialGraph(std::vector<double> u, std::shared_ptr<const AngularDiscretization> disc)
      : u_(std::move(u)), disc_(std::move(disc)) {}

  std::vector<double> u_;
  std::shared_ptr<const AngularDiscretization> disc_;
};

RadialGraph sphere_graph(const WarpedProductModel& model, double s_hat, std::size_t node_count);

/// One term a·cos(kθ) of an axisymmetric perturbation.
struct Perturbation {
  double amplitude = 0.0;
  int mode = 1;
};

RadialGraph perturbed_graph(const WarpedProductModel& model, double s_hat,
                            std::span<const Perturbation> terms, std::size_t node_count);
RadialGraph graph_from_function(const WarpedProductModel& model,
                                const std::function<double(double)>& u,
                                std::size_t node_count);

/// Random perturbation with modes in [1, max_mode] and Σ|a_k| ≤ max_amplitude.
std::vector<Perturbation> random_perturbation(std::mt19937_64& rng, double max_amplitude = 0.2,
                                              int max_mode = 4);

/// Per-node geometry.
struct SurfaceGeometry {
  std::vector<double> theta;
  std::vector<double> u;
  std::vector<double> area_density;  ///< density w.r.t. dθ, before the |S^{n−2}| factor
  std::vector<double> mean_curvature;
  std::vector<double> traceless_defect;  ///< |h̊|²
  std::vector<double> normal_radial;
  std::vector<double> normal_angular;
  std::vector<double> f_on_surface;
};

/// Throws GraphError when the cosine spectrum of u is not resolved.
SurfaceGeometry graph_geometry(const WarpedProductModel& model, const RadialGraph& graph,
                               Execution exec = Execution::parallel);

/// Geometry at the Gauss–Legendre points plus weights that already include |S^{n−2}|.
struct SurfaceQuadrature {
  std::vector<SurfacePoint> points;
  std::vector<double> weights;

  /// ∫_Σ g dσ.
  [[nodiscard]] double integrate(const kernels::PointIntegrand& g,
                                 Execution exec = Execution::parallel) const;
  [[nodiscard]] double min_mean_curvature() const;
  [[nodiscard]] double max_mean_curvature() const;
};
SurfaceQuadrature surface_quadrature(const WarpedProductModel& model, const RadialGraph& graph,
                                     Execution exec = Execution::parallel);

/// Throws GraphError if the top quarter of the cosine spectrum carries more
/// than 1e-3 of the graph's size.
void check_graph_resolved(const RadialGraph& graph);

double area(const WarpedProductModel& model, const RadialGraph& graph);
/// ∫_Ω f dμ for the region between the horizon (or the pole) and the graph.
double weighted_volume(const WarpedProductModel& model, const RadialGraph& graph);

/// |FD d/dε Area(Σ + ε·bump·ν) − ∫ H·bump dσ| / |∫ H·bump dσ| with central step 1e-5.
double mean_curvature_fd_check(const WarpedProductModel& model, const RadialGraph& graph,
                               const std::function<double(double)>& bump);

/// CSV with columns theta,u.
void write_graph_csv(std::ostream& out, const RadialGraph& graph);

/// FNV-1a over the bit patterns of the nodal values.
std::uint64_t graph_hash(const RadialGraph& graph);

}  // namespace substatic
