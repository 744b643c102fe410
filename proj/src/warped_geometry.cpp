#include "substatic/warped_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "substatic/errors.hpp"

namespace substatic {
namespace {

constexpr double kDegenerateHorizon = 1e-10;

double nd(int n) { return static_cast<double>(n); }

}  // namespace

double unit_sphere_volume(int k) {
  const double d = static_cast<double>(k) + 1.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

WarpedProductModel::WarpedProductModel(std::string name, int n, double c_cross, double c_pot,
                                       double cross_volume, PotentialProfile potential,
                                       std::optional<double> s0, double s_max)
    : name_(std::move(name)),
      n_(n),
      c_cross_(c_cross),
      c_pot_(c_pot),
      cross_volume_(cross_volume),
      potential_(std::move(potential)),
      s0_(s0),
      s_max_(s_max) {}

WarpedProductModel WarpedProductModel::create(ModelSpec spec) {
  if (spec.n < 3) {
    throw ModelError("model '" + spec.name + "': dimension n must be at least 3");
  }
  if (!(spec.s_max > 0.0) || !std::isfinite(spec.s_max)) {
    throw ModelError("model '" + spec.name + "': s_max must be positive");
  }
  if (spec.c_cross < spec.c_pot) {
    throw ModelError("model '" + spec.name + "': c_cross must be >= c_pot");
  }
  const double volume = spec.cross_volume.value_or(unit_sphere_volume(spec.n - 1));
  if (!(volume > 0.0)) {
    throw ModelError("model '" + spec.name + "': cross_volume must be positive");
  }

  double lo = spec.horizon_search_lo.value_or(1e-6 * spec.s_max);
  if (const auto* tab = spec.potential.as_tabulated()) {
    lo = std::max(lo, tab->front());
    if (tab->back() < spec.s_max * (1.0 - 1e-12)) {
      throw ModelError("model '" + spec.name + "': tabulated range ends before s_max");
    }
  }
  const double f2_outer = spec.potential.squared(spec.s_max, spec.c_pot, spec.n).value;
  if (!(f2_outer > 0.0)) {
    throw ModelError("model '" + spec.name + "': f must be positive at s_max");
  }

  std::optional<double> s0;
  try {
    s0 = horizon_radius(spec.potential, spec.c_pot, spec.n, {lo, spec.s_max});
  } catch (const DomainError&) {
    s0.reset();
  }
  if (s0 && !(*s0 < spec.s_max)) {
    throw ModelError("model '" + spec.name + "': horizon must lie inside the domain");
  }

  WarpedProductModel model(std::move(spec.name), spec.n, spec.c_cross, spec.c_pot, volume,
                           std::move(spec.potential), s0, spec.s_max);

  // f > 0 on (s_min, s_max].
  const double inner = s0.value_or(lo);
  constexpr int kCheck = 2000;
  for (int i = 1; i <= kCheck; ++i) {
    const double s = inner + (model.s_max_ - inner) * i / kCheck;
    if (!(model.squared(s).value > 0.0)) {
      throw ModelError("model '" + model.name_ + "': f vanishes inside the domain");
    }
  }
  if (s0) {
    (void)surface_gravity(model);
  }
  return model;
}

SquaredPotential WarpedProductModel::squared(double s) const {
  const double scale = s_max_;
  if (!(s >= s_min() - 1e-12 * scale) || !(s <= s_max_ * (1.0 + 1e-12))) {
    throw DomainError("s outside the model domain of '" + name_ + "'");
  }
  return potential_.squared(s, c_pot_, n_);
}

SquaredPotential WarpedProductModel::squared_near_horizon(double y) const {
  if (!s0_) {
    return squared(y);
  }
  return potential_.squared_from_root(*s0_, y, c_pot_, n_);
}

WarpedProductModel WarpedProductModel::renamed(std::string name) const {
  WarpedProductModel copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

std::vector<double> radial_grid(const WarpedProductModel& model, GridSpec grid) {
  const std::size_t count = std::max<std::size_t>(grid.count, 2);
  const double lo = model.s_min();
  const double hi = model.s_max();
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(count);
  }
  return out;
}

PotentialValue potential_eval(const WarpedProductModel& model, double s) {
  const SquaredPotential sq = model.squared(s);
  const double neg_tol = 1e-12 * (1.0 + std::abs(model.c_pot()));
  if (sq.value < -neg_tol) {
    throw ModelError("negative radicand f² at s = " + std::to_string(s) + " in model '" +
                     model.name() + "'");
  }
  if (model.has_horizon() && model.potential().as_tabulated() != nullptr) {
    const double s0 = *model.horizon();
    const double eps_h = 1e-4 * (model.s_max() - s0);
    if (s - s0 < eps_h) {
      const double k = surface_gravity(model);
      PotentialValue out;
      out.f = std::sqrt(2.0 * k * std::max(s - s0, 0.0));
      if (out.f == 0.0) {
        out.df = std::numeric_limits<double>::infinity();
        out.d2f = -std::numeric_limits<double>::infinity();
      } else {
        out.df = k / out.f;
        out.d2f = -k * k / (out.f * out.f * out.f);
      }
      return out;
    }
  }
  return potential_from_squared(sq);
}

double surface_gravity(const WarpedProductModel& model) {
  if (!model.has_horizon()) {
    throw DomainError("model '" + model.name() + "' has no horizon");
  }
  const double k = 0.5 * model.squared(*model.horizon()).d1;
  if (!(k > kDegenerateHorizon)) {
    throw DegenerateHorizonError("degenerate horizon in model '" + model.name() + "'");
  }
  return k;
}

double brendle_F(const WarpedProductModel& model, double s) {
  const SquaredPotential sq = model.squared(s);
  const double n = nd(model.n());
  return sq.d1 / s - (n - 2.0) * (model.c_pot() - sq.value) / (s * s);
}

double brendle_F_prime(const WarpedProductModel& model, double s) {
  const SquaredPotential sq = model.squared(s);
  const double n = nd(model.n());
  return sq.d2 / s - sq.d1 / (s * s) + (n - 2.0) * sq.d1 / (s * s) +
         2.0 * (n - 2.0) * (model.c_pot() - sq.value) / (s * s * s);
}

RicciComponents ricci_components(const WarpedProductModel& model, double s) {
  const SquaredPotential sq = model.squared(s);
  const double n = nd(model.n());
  return {-(n - 1.0) * sq.d1 / (2.0 * s), -(0.5 * s * sq.d1 + (n - 2.0) * sq.value)};
}

double ricci_tangential_unit(const WarpedProductModel& model, double s) {
  const double n = nd(model.n());
  return ((n - 2.0) * model.c_cross() + ricci_components(model, s).tangential_coeff) / (s * s);
}

HessianOverF hessian_over_f_components(const WarpedProductModel& model, double s) {
  const SquaredPotential sq = model.squared(s);
  return {0.5 * sq.d2, 0.5 * sq.d1 / s};
}

HessianOverF hessian_over_f_horizon_limits(const WarpedProductModel& model) {
  const double s0 = model.horizon().value_or(0.0);
  if (!model.has_horizon()) {
    throw DomainError("model '" + model.name() + "' has no horizon");
  }
  const double k = surface_gravity(model);
  return {0.5 * model.squared(s0).d2, k / s0};
}

double laplacian_f_over_f(const WarpedProductModel& model, double s) {
  if (!model.has_horizon() && s <= 0.0) {
    throw DomainError("Δf/f is evaluated at the pole of a boundaryless model");
  }
  const SquaredPotential sq = model.squared(s);
  const double n = nd(model.n());
  return 0.5 * sq.d2 + (n - 1.0) * sq.d1 / (2.0 * s);
}

ContinuityProbe probe_hessian_continuity(const WarpedProductModel& model) {
  if (!model.has_horizon()) {
    throw DomainError("model '" + model.name() + "' has no horizon");
  }
  ContinuityProbe probe;
  const double width = model.s_max() - *model.horizon();
  for (int k = 1; k <= 8; ++k) {
    const double y = width * std::pow(10.0, -k);
    probe.offsets.push_back(y);
    probe.radial_values.push_back(0.5 * model.squared_near_horizon(y).d2);
  }
  const double last = probe.radial_values.back();
  const double prev = probe.radial_values[probe.radial_values.size() - 2];
  probe.continuous = std::isfinite(last) && std::abs(last - prev) < 1e-4 * (1.0 + std::abs(last));
  return probe;
}

SubstaticComponents substatic_components(const WarpedProductModel& model, double s) {
  const double f = std::sqrt(std::max(model.squared(s).value, 0.0));
  const RicciComponents ric = ricci_components(model, s);
  const HessianOverF hess = hessian_over_f_components(model, s);
  const double lap = laplacian_f_over_f(model, s);
  return {f * (ric.radial - hess.radial + lap),
          f * (ricci_tangential_unit(model, s) - hess.tangential + lap)};
}

// ---------------------------------------------------------------------------

EtaProfile::EtaProfile(double t_lo, double t_hi, EtaFn eta)
    : t_lo_(t_lo), t_hi_(t_hi), eta_(std::move(eta)) {
  if (!(t_lo > 0.0) || !(t_lo < t_hi)) {
    throw DomainError("η profile needs 0 < t_lo < t_hi");
  }
}

EtaValue EtaProfile::operator()(double t) const {
  const double tol = 1e-12 * (t_hi_ - t_lo_);
  if (t < t_lo_ - tol || t > t_hi_ + tol) {
    throw DomainError("t outside the η profile range");
  }
  return eta_(t);
}

EtaProfile eta_extract(const WarpedProductModel& model) {
  const double n = nd(model.n());
  const double s_lo = model.has_horizon() ? *model.horizon() : 0.05 * model.s_max();
  const double t_lo = std::pow(model.s_max(), -n);
  const double t_hi = std::pow(s_lo, -n);
  const double c = model.c_pot();
  auto eta = [model, n, c, s_lo](double t) {
    const double s = std::clamp(std::pow(t, -1.0 / n), s_lo, model.s_max());
    const SquaredPotential sq = model.squared(s);
    const double e = (sq.value - c) / (s * s);
    const double e_s = sq.d1 / (s * s) - 2.0 * (sq.value - c) / (s * s * s);
    const double e_ss =
        sq.d2 / (s * s) - 4.0 * sq.d1 / (s * s * s) + 6.0 * (sq.value - c) / (s * s * s * s);
    const double s_t = -std::pow(s, n + 1.0) / n;
    const double s_tt = (n + 1.0) * std::pow(s, 2.0 * n + 1.0) / (n * n);
    return EtaValue{e, e_s * s_t, e_ss * s_t * s_t + e_s * s_tt};
  };
  return EtaProfile(t_lo, t_hi, std::move(eta));
}

DeSitterFit fit_desitter_schwarzschild(const EtaProfile& eta) {
  constexpr int kPoints = 256;
  Eigen::MatrixXd a(kPoints, 2);
  Eigen::VectorXd b(kPoints);
  const double mid = 0.5 * (eta.t_lo() + eta.t_hi());
  const double half = 0.5 * (eta.t_hi() - eta.t_lo());
  for (int j = 0; j < kPoints; ++j) {
    const double t = mid - half * std::cos(std::numbers::pi * j / (kPoints - 1));
    a(j, 0) = 1.0;
    a(j, 1) = t;
    b(j) = eta(t).value;
  }
  const Eigen::Vector2d coef = a.colPivHouseholderQr().solve(b);
  DeSitterFit fit;
  fit.lambda = -coef(0);
  fit.m = -0.5 * coef(1);
  fit.residual = (a * coef - b).cwiseAbs().maxCoeff();
  return fit;
}

// ---------------------------------------------------------------------------

std::vector<SubstaticSample> substatic_samples(const WarpedProductModel& model, GridSpec grid,
                                               double tol_scale) {
  const double n = nd(model.n());
  const EtaProfile eta = eta_extract(model);
  const std::vector<double> s_grid = radial_grid(model, grid);
  std::vector<SubstaticSample> out;
  out.reserve(s_grid.size());
  for (const double s : s_grid) {
    const SquaredPotential sq = model.squared(s);
    if (!(sq.value > 0.0)) {
      throw ModelError("f is not positive inside the domain of '" + model.name() + "'");
    }
    SubstaticSample smp;
    smp.s = s;
    smp.f = std::sqrt(sq.value);
    // r-coordinates with ḣ = f: ḣ·ḟ/f − ḧ, where ḟ = ḧ = f f′ = ½(f²)′.
    const double h_dot = smp.f;
    const double f_dot = 0.5 * sq.d1;
    const double h_ddot = 0.5 * sq.d1;
    smp.radial_gap = h_dot * f_dot / smp.f - h_ddot;
    // f(Ric_N − (n−2)c g_N) + ½ h³ Ḟ g_N on a unit tangent vector, Ḟ = f F′(s).
    const double cross_term = smp.f * (n - 2.0) * (model.c_cross() - model.c_pot());
    const double flow_term = 0.5 * s * s * s * smp.f * brendle_F_prime(model, s);
    smp.tangential_gap = (cross_term + flow_term) / (s * s);
    const double magnitude = (std::abs(cross_term) + std::abs(flow_term)) / (s * s) +
                             std::abs(h_dot * f_dot / smp.f) + std::abs(h_ddot);
    smp.tolerance = 1e-9 * tol_scale * (1.0 + magnitude);
    smp.brendle_F = brendle_F(model, s);
    smp.t = std::clamp(std::pow(s, -n), eta.t_lo(), eta.t_hi());
    smp.eta = eta(smp.t);
    out.push_back(smp);
  }
  return out;
}

SubstaticReport substatic_check(const WarpedProductModel& model, GridSpec grid, double tol_scale) {
  const std::vector<SubstaticSample> samples = substatic_samples(model, grid, tol_scale);
  SubstaticReport report;
  report.samples = samples.size();
  report.radial_gap_min = std::numeric_limits<double>::infinity();
  report.tangential_gap_min = std::numeric_limits<double>::infinity();
  report.eta_convexity_min = std::numeric_limits<double>::infinity();
  report.eta_slope_max = -std::numeric_limits<double>::infinity();
  bool radial_ok = true;
  bool tangential_ok = true;
  bool f_positive = true;
  bool f_monotone = true;
  bool h4 = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const SubstaticSample& smp = samples[i];
    report.radial_gap_min = std::min(report.radial_gap_min, smp.radial_gap);
    report.tangential_gap_min = std::min(report.tangential_gap_min, smp.tangential_gap);
    report.eta_convexity_min = std::min(report.eta_convexity_min, smp.eta.d2);
    report.eta_slope_max = std::max(report.eta_slope_max, smp.eta.d1);
    radial_ok = radial_ok && smp.radial_gap >= -smp.tolerance;
    tangential_ok = tangential_ok && smp.tangential_gap >= -smp.tolerance;
    f_positive = f_positive && smp.f > 0.0;
    if (i > 0) {
      const double prev = samples[i - 1].brendle_F;
      const double tol = 1e-9 * tol_scale * (1.0 + std::abs(prev) + std::abs(smp.brendle_F));
      f_monotone = f_monotone && smp.brendle_F >= prev - tol;
    }
    const double slope_tol = 1e-9 * tol_scale * (1.0 + std::abs(smp.eta.value));
    h4 = h4 && smp.eta.d1 < -slope_tol;
  }
  report.H1 = false;
  if (model.has_horizon()) {
    try {
      report.H1 = surface_gravity(model) > 0.0;
    } catch (const DegenerateHorizonError&) {
      report.H1 = false;
    }
  }
  report.H2 = f_positive;
  report.H3 = f_monotone;
  report.H4 = h4;
  report.substatic = radial_ok && tangential_ok;
  return report;
}

double montiel_potential_residual(const WarpedProductModel& model, GridSpec grid,
                                  std::function<double(double)> phi_prime) {
  if (!phi_prime) {
    phi_prime = [&model](double s) { return s / std::sqrt(model.squared(s).value); };
  }
  double worst = 0.0;
  for (const double s : radial_grid(model, grid)) {
    const SquaredPotential sq = model.squared(s);
    const double f = std::sqrt(sq.value);
    // φ′ = s/f is steep near zeros of f²; f²/|(f²)′| estimates the distance to one.
    const double reach = std::abs(sq.d1) > 0.0 ? sq.value / std::abs(sq.d1) : s;
    const double h = 1e-3 * std::min({s, s - model.s_min(), reach});
    const double p = phi_prime(s);
    double pp = 0.0;
    if (s + 2.0 * h <= model.s_max()) {
      pp = (phi_prime(s - 2.0 * h) - 8.0 * phi_prime(s - h) + 8.0 * phi_prime(s + h) -
            phi_prime(s + 2.0 * h)) /
           (12.0 * h);
    } else {
      // One-sided stencils have a larger error constant; shrink the step.
      const double k = 0.1 * std::min(h, 0.25 * (s - model.s_min()));
      pp = (25.0 * p - 48.0 * phi_prime(s - k) + 36.0 * phi_prime(s - 2.0 * k) -
            16.0 * phi_prime(s - 3.0 * k) + 3.0 * phi_prime(s - 4.0 * k)) /
           (12.0 * k);
    }
    const double radial = sq.value * pp + 0.5 * sq.d1 * p - f;
    const double tangential = sq.value * p / s - f;
    worst = std::max({worst, std::abs(radial), std::abs(tangential)});
  }
  return worst;
}

bool cylinder_substatic_check(const std::function<double(double)>& f, double c_cross, int n,
                              ProductGrid grid) {
  if (!(grid.r_lo < grid.r_hi) || grid.count < 2) {
    throw DomainError("product grid needs r_lo < r_hi and at least two samples");
  }
  const double scale = grid.r_hi - grid.r_lo;
  const double h = 1e-4 * scale;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double r = grid.r_lo + scale * static_cast<double>(i) / static_cast<double>(grid.count - 1);
    const double f0 = f(r);
    const double f_dd = (f(r + h) - 2.0 * f0 + f(r - h)) / (h * h);
    const double value = f_dd + (nd(n) - 2.0) * c_cross * f0;
    const double tol = 1e-6 * (1.0 + std::abs(f0) + std::abs(f_dd));
    if (value < -tol) {
      return false;
    }
  }
  return true;
}

}  // namespace substatic
