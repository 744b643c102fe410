#pragma once

// Substatic warped products g = ds⊗ds/f(s)² + s² g_N with potential f = ḣ,
// and the pointwise geometry needed by the rest of the library.
//
// Curvature quantities are reported on unit vectors: "radial" means the unit
// normal to the coordinate spheres {s = const}, "tangential" any unit vector
// tangent to them.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "substatic/potential.hpp"

namespace substatic {

/// Volume of the unit k-sphere S^k.
double unit_sphere_volume(int k);

struct ModelSpec {
  std::string name;
  int n = 3;
  double c_cross = 1.0;
  double c_pot = 1.0;
  std::optional<double> cross_volume;  ///< defaults to |S^{n-1}|
  PotentialProfile potential = PotentialProfile::closed_form(0.0, 0.0);
  double s_max = 1.0;
  /// Inner end of the horizon search bracket; defaults to 1e-6·s_max, or the
  /// first sample of a tabulated profile.
  std::optional<double> horizon_search_lo;
};

class WarpedProductModel {
 public:
  /// Locates the horizon and validates the model invariants.
  static WarpedProductModel create(ModelSpec spec);

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] double c_cross() const { return c_cross_; }
  [[nodiscard]] double c_pot() const { return c_pot_; }
  [[nodiscard]] double cross_volume() const { return cross_volume_; }
  [[nodiscard]] const PotentialProfile& potential() const { return potential_; }
  [[nodiscard]] std::optional<double> horizon() const { return s0_; }
  [[nodiscard]] bool has_horizon() const { return s0_.has_value(); }
  [[nodiscard]] double s_max() const { return s_max_; }
  /// Inner end of the domain: the horizon radius, or 0 (the pole) without horizon.
  [[nodiscard]] double s_min() const { return s0_.value_or(0.0); }

  /// f², (f²)′, (f²)″ at s; throws DomainError outside [s_min, s_max].
  [[nodiscard]] SquaredPotential squared(double s) const;
  /// Same at s = s0 + y, cancellation-free near the horizon where possible.
  [[nodiscard]] SquaredPotential squared_near_horizon(double y) const;

  /// Copy with a different name (used for catalogue aliases and corrupted controls).
  [[nodiscard]] WarpedProductModel renamed(std::string name) const;

 private:
  WarpedProductModel(std::string name, int n, double c_cross, double c_pot, double cross_volume,
                     PotentialProfile potential, std::optional<double> s0, double s_max);

  std::string name_;
  int n_;
  double c_cross_;
  double c_pot_;
  double cross_volume_;
  PotentialProfile potential_;
  std::optional<double> s0_;
  double s_max_;
};

/// Uniform sampling of (s_min, s_max]: the inner end is excluded, s_max included.
struct GridSpec {
  std::size_t count = 400;
};
std::vector<double> radial_grid(const WarpedProductModel& model, GridSpec grid);

// ---------------------------------------------------------------------------
// Pointwise quantities

PotentialValue potential_eval(const WarpedProductModel& model, double s);

/// k = lim_{s→s0} f f′ = ½ (f²)′(s0). Throws DegenerateHorizonError when k ≤ 1e-10.
double surface_gravity(const WarpedProductModel& model);

/// F(r) = 2ḧ/h − (n−2)(c − ḣ²)/h² with h = s, ḣ = f, ḧ = f f′ and c = c_pot.
double brendle_F(const WarpedProductModel& model, double s);
/// dF/ds.
double brendle_F_prime(const WarpedProductModel& model, double s);

struct RicciComponents {
  double radial = 0.0;            ///< Ric(∂_r, ∂_r)
  double tangential_coeff = 0.0;  ///< coefficient of g_N added to Ric_N
};
RicciComponents ricci_components(const WarpedProductModel& model, double s);

/// Ric on a unit tangent vector when Ric_N = (n−2) c_cross g_N.
double ricci_tangential_unit(const WarpedProductModel& model, double s);

struct HessianOverF {
  double radial = 0.0;
  double tangential = 0.0;
};
HessianOverF hessian_over_f_components(const WarpedProductModel& model, double s);
/// Limits at the horizon: radial → ½(f²)″(s0), tangential → k/s0.
HessianOverF hessian_over_f_horizon_limits(const WarpedProductModel& model);

/// Δf/f; at s0 the horizon limit ½(f²)″(s0) + (n−1)k/s0.
double laplacian_f_over_f(const WarpedProductModel& model, double s);

struct ContinuityProbe {
  std::vector<double> offsets;        ///< s − s0 at each probe
  std::vector<double> radial_values;  ///< ∇∇f/f on the unit radial vector
  bool continuous = false;
};
/// Probes continuity of ∇∇f/f up to the horizon by approaching s0 geometrically.
ContinuityProbe probe_hessian_continuity(const WarpedProductModel& model);

struct SubstaticComponents {
  double radial = 0.0;      ///< [f Ric − ∇∇f + Δf g](e_r, e_r)
  double tangential = 0.0;  ///< same on a unit tangent vector
};
/// Substatic tensor assembled directly from the curvature components.
SubstaticComponents substatic_components(const WarpedProductModel& model, double s);

// ---------------------------------------------------------------------------
// η classification: f² = c + s² η(s^{-n})

class EtaProfile {
 public:
  EtaProfile(double t_lo, double t_hi, EtaFn eta);

  [[nodiscard]] double t_lo() const { return t_lo_; }
  [[nodiscard]] double t_hi() const { return t_hi_; }
  [[nodiscard]] EtaValue operator()(double t) const;

 private:
  double t_lo_;
  double t_hi_;
  EtaFn eta_;
};

/// η(t) = (f(s)² − c_pot)/s² with s = t^{-1/n}; derivatives by the chain rule.
/// Boundaryless models are sampled down to s = 0.05·s_max.
EtaProfile eta_extract(const WarpedProductModel& model);

struct DeSitterFit {
  double lambda = 0.0;
  double m = 0.0;
  double residual = 0.0;  ///< max |η(t) − (−λ − 2mt)| on the fit grid
};
/// Least-squares affine fit η(t) ≈ −λ − 2mt on 256 Chebyshev points of [t_lo, t_hi].
DeSitterFit fit_desitter_schwarzschild(const EtaProfile& eta);

// ---------------------------------------------------------------------------
// Substatic certification

struct SubstaticReport {
  double radial_gap_min = 0.0;
  double tangential_gap_min = 0.0;
  bool H1 = false;
  bool H2 = false;
  bool H3 = false;
  bool H4 = false;
  double eta_convexity_min = 0.0;
  double eta_slope_max = 0.0;
  bool substatic = false;
  std::size_t samples = 0;
};

struct SubstaticSample {
  double s = 0.0;
  double f = 0.0;
  double radial_gap = 0.0;
  double tangential_gap = 0.0;
  double tolerance = 0.0;
  double brendle_F = 0.0;
  double t = 0.0;
  EtaValue eta;
};

/// Per-sample data behind substatic_check.
std::vector<SubstaticSample> substatic_samples(const WarpedProductModel& model, GridSpec grid,
                                               double tol_scale = 1.0);
SubstaticReport substatic_check(const WarpedProductModel& model, GridSpec grid = {},
                                double tol_scale = 1.0);

/// Max residual of ∇∇φ = f g over the grid, using the two independent unit
/// components. `phi_prime` defaults to φ′(s) = s/f(s); φ″ is taken by fourth-order
/// differences of φ′ with a step of 1e-3 times the estimated distance to a zero of f.
double montiel_potential_residual(const WarpedProductModel& model, GridSpec grid = {},
                                  std::function<double(double)> phi_prime = {});

struct ProductGrid {
  double r_lo = 0.0;
  double r_hi = 1.0;
  std::size_t count = 400;
};
/// Product case g = dr² + g_N: true iff f̈ + (n−2) c f ≥ −tol on the grid (f̈ by
/// central differences, step 1e-4·scale).
bool cylinder_substatic_check(const std::function<double(double)>& f, double c_cross, int n,
                              ProductGrid grid);

}  // namespace substatic
