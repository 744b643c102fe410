#include "substatic/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>

#include "substatic/errors.hpp"
#include "substatic/functionals.hpp"

namespace substatic {
namespace {

struct Coefficients {
  double s = 0.0;
  SquaredPotential sq;
  double lap = 0.0;  ///< Δf/f
};

double width(const TorsionSolution& sol) { return sol.s_hat - sol.s_inner; }

// Coefficients at the mapped point x.
Coefficients coefficients_at(const WarpedProductModel& model, TorsionMapping mapping,
                             double s_inner, double s_hat, double x) {
  const double n = static_cast<double>(model.n());
  Coefficients c;
  if (mapping == TorsionMapping::horizon_sqrt) {
    const double y = (s_hat - s_inner) * x * x;
    c.s = s_inner + y;
    c.sq = model.squared_near_horizon(y);
  } else {
    c.s = s_hat * std::sqrt(x);
    c.sq = model.squared(c.s);
  }
  // At a regular center (f²)′/s → (f²)″.
  const double d1_over_s = c.s > 0.0 ? c.sq.d1 / c.s : c.sq.d2;
  c.lap = 0.5 * c.sq.d2 + 0.5 * (n - 1.0) * d1_over_s;
  return c;
}

std::vector<double> interior_points(std::size_t grid_size) {
  const ChebyshevInterval fine(2 * grid_size);
  const auto& nodes = fine.nodes();
  return {nodes.begin() + 1, nodes.end() - 1};
}

std::vector<double> coefficients_of(const TorsionSolution& sol) {
  if (sol.u.size() < 3) {
    throw DomainError("torsion solution has too few nodes");
  }
  std::vector<double> c = ChebyshevInterval(sol.u.size() - 1).coefficients(sol.u);
  // Coefficients at roundoff level carry no information but are amplified by
  // k⁴ in the second derivative; drop them.
  double peak = 0.0;
  for (double v : c) {
    peak = std::max(peak, std::abs(v));
  }
  const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(c.size()) * peak;
  for (double& v : c) {
    if (std::abs(v) < floor) {
      v = 0.0;
    }
  }
  return c;
}

// Residual of the torsion equation in units of the s-equation.
double equation_residual(const WarpedProductModel& model, const TorsionSolution& sol,
                         double x, const SeriesValue& v) {
  const double n = static_cast<double>(model.n());
  const Coefficients c = coefficients_at(model, sol.mapping, sol.s_inner, sol.s_hat, x);
  const double f2 = c.sq.value;
  if (sol.mapping == TorsionMapping::horizon_sqrt) {
    const double L = width(sol);
    const double q = f2 / (L * x * x);
    const double b = (c.sq.d1 - q + 2.0 * (n - 1.0) * f2 / c.s) / x;
    return (q * v.d2 + b * v.d1 - 4.0 * L * c.lap * v.value + 4.0 * L) / (4.0 * L);
  }
  const double r2 = sol.s_hat * sol.s_hat;
  return (4.0 * f2 * x * v.d2 + (2.0 * f2 + c.sq.d1 * c.s + 2.0 * (n - 1.0) * f2) * v.d1 -
          r2 * c.lap * v.value + r2) /
         r2;
}

double confhess_at(const WarpedProductModel& model, const TorsionSolution& sol, double x,
                   const SeriesValue& v) {
  const double n = static_cast<double>(model.n());
  const Coefficients c = coefficients_at(model, sol.mapping, sol.s_inner, sol.s_hat, x);
  const double f2 = c.sq.value;
  double a_minus_b = 0.0;  // ∇∇u(e_r, e_r) − ∇∇u(e_t, e_t)
  if (sol.mapping == TorsionMapping::horizon_sqrt) {
    const double L = width(sol);
    const double q = f2 / (L * x * x);
    a_minus_b = (q * v.d2 + (c.sq.d1 - q - 2.0 * f2 / c.s) * v.d1 / x) / (4.0 * L);
  } else {
    const double r2 = sol.s_hat * sol.s_hat;
    a_minus_b = (4.0 * f2 * x * v.d2 + c.sq.d1 * c.s * v.d1) / r2;
  }
  // The same split for ∇∇f/f.
  const double hess_f = 0.5 * c.sq.d2 - 0.5 * c.sq.d1 / c.s;
  return (n - 1.0) / n * std::abs(a_minus_b - v.value * hess_f);
}

TorsionValue to_s_derivatives(const TorsionSolution& sol, double x, const SeriesValue& v) {
  TorsionValue out;
  out.u = v.value;
  if (sol.mapping == TorsionMapping::horizon_sqrt) {
    const double L = width(sol);
    out.du_ds = v.d1 / (2.0 * L * x);
    out.d2u_ds2 = (v.d2 - v.d1 / x) / (4.0 * L * L * x * x);
  } else {
    const double r2 = sol.s_hat * sol.s_hat;
    const double s = sol.s_hat * std::sqrt(x);
    out.du_ds = 2.0 * s * v.d1 / r2;
    out.d2u_ds2 = 2.0 * v.d1 / r2 + 4.0 * x * v.d2 / r2;
  }
  return out;
}

double map_to_x(const TorsionSolution& sol, double s) {
  if (sol.mapping == TorsionMapping::horizon_sqrt) {
    return std::sqrt(std::max(s - sol.s_inner, 0.0) / width(sol));
  }
  return (s * s) / (sol.s_hat * sol.s_hat);
}

}  // namespace

TorsionSolution solve_torsion_radial(const WarpedProductModel& model, double s_hat,
                                     const TorsionOptions& options) {
  const double n = static_cast<double>(model.n());
  if (!(s_hat > model.s_min()) || s_hat > model.s_max() * (1.0 + 1e-12)) {
    throw DomainError(fmt::format("torsion domain empty or outside the model: ŝ = {}", s_hat));
  }
  if (options.grid_size < 4) {
    throw DomainError("torsion grid needs at least 4 intervals");
  }
  TorsionSolution sol;
  sol.model = model.name();
  sol.s_hat = s_hat;
  sol.mapping =
      model.has_horizon() ? TorsionMapping::horizon_sqrt : TorsionMapping::center_square;
  sol.s_inner = model.s_min();
  if (model.has_horizon()) {
    sol.datum = options.horizon_datum.value_or(horizon_constant_closed(model).value);
  }

  const ChebyshevInterval cheb(options.grid_size);
  const auto m = static_cast<Eigen::Index>(cheb.size());
  const auto& xs = cheb.nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  const double L = s_hat - sol.s_inner;
  const double r2 = s_hat * s_hat;

  for (Eigen::Index j = 0; j < m; ++j) {
    const double x = xs[static_cast<std::size_t>(j)];
    if (j == m - 1) {
      a(j, j) = 1.0;  // u(ŝ) = 0
      continue;
    }
    if (sol.mapping == TorsionMapping::horizon_sqrt) {
      if (j == 0) {
        if (options.horizon == HorizonCondition::dirichlet) {
          a(0, 0) = 1.0;
          rhs(0) = sol.datum;
        } else {
          a.row(0) = cheb.d1().row(0);
        }
        continue;
      }
      const Coefficients c = coefficients_at(model, sol.mapping, sol.s_inner, s_hat, x);
      const double q = c.sq.value / (L * x * x);
      const double b = (c.sq.d1 - q + 2.0 * (n - 1.0) * c.sq.value / c.s) / x;
      a.row(j) = q * cheb.d2().row(j) + b * cheb.d1().row(j);
      a(j, j) -= 4.0 * L * c.lap;
      rhs(j) = -4.0 * L;
    } else {
      const Coefficients c = coefficients_at(model, sol.mapping, sol.s_inner, s_hat, x);
      const double f2 = c.sq.value;
      a.row(j) = 4.0 * f2 * x * cheb.d2().row(j) +
                 (2.0 * f2 + c.sq.d1 * c.s + 2.0 * (n - 1.0) * f2) * cheb.d1().row(j);
      a(j, j) -= r2 * c.lap;
      rhs(j) = -r2;
    }
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) {
    throw SolverError("torsion collocation matrix is singular");
  }
  const Eigen::VectorXd u = lu.solve(rhs);
  if (!u.allFinite() || (a * u - rhs).norm() > 1e-6 * (1.0 + rhs.norm())) {
    throw SolverError("torsion linear solve did not converge");
  }

  sol.x = xs;
  sol.u.assign(u.data(), u.data() + u.size());
  if (sol.mapping == TorsionMapping::center_square) {
    sol.datum = sol.u.front();
  } else if (options.horizon == HorizonCondition::regular) {
    sol.datum = sol.u.front();
  }
  const std::vector<double> coeffs = coefficients_of(sol);
  for (const double x : xs) {
    sol.s.push_back(sol.mapping == TorsionMapping::horizon_sqrt ? sol.s_inner + L * x * x
                                                                : s_hat * std::sqrt(x));
  }
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (j == 0) {
      sol.du_ds.push_back(inner_slope(sol));
    } else {
      sol.du_ds.push_back(
          to_s_derivatives(sol, xs[j], ChebyshevInterval::evaluate(coeffs, xs[j])).du_ds);
    }
  }
  sol.residual = torsion_residual(model, sol);
  sol.flagged = !(sol.residual < options.residual_tol);
  return sol;
}

TorsionValue evaluate_torsion(const TorsionSolution& sol, double s) {
  if (s < sol.s_inner || s > sol.s_hat * (1.0 + 1e-12)) {
    throw DomainError("evaluation point outside the torsion domain");
  }
  const double x = map_to_x(sol, s);
  const std::vector<double> coeffs = coefficients_of(sol);
  if (x == 0.0) {
    TorsionValue v;
    v.u = ChebyshevInterval::evaluate(coeffs, 0.0).value;
    v.du_ds = inner_slope(sol);
    v.d2u_ds2 = std::numeric_limits<double>::quiet_NaN();
    return v;
  }
  return to_s_derivatives(sol, x, ChebyshevInterval::evaluate(coeffs, x));
}

double inner_slope(const TorsionSolution& sol) {
  if (sol.mapping == TorsionMapping::center_square) {
    return 0.0;
  }
  const SeriesValue v = ChebyshevInterval::evaluate(coefficients_of(sol), 0.0);
  double scale = 0.0;
  for (double u : sol.u) {
    scale = std::max(scale, std::abs(u));
  }
  if (std::abs(v.d1) > 1e-8 * (1.0 + scale)) {
    return std::copysign(std::numeric_limits<double>::infinity(), v.d1);
  }
  return v.d2 / (2.0 * width(sol));
}

double torsion_residual(const WarpedProductModel& model, const TorsionSolution& sol) {
  const std::vector<double> coeffs = coefficients_of(sol);
  double worst = 0.0;
  for (const double x : interior_points(sol.u.size() - 1)) {
    const SeriesValue v = ChebyshevInterval::evaluate(coeffs, x);
    worst = std::max(worst, std::abs(equation_residual(model, sol, x, v)));
  }
  return worst;
}

double conformal_hessian_residual(const WarpedProductModel& model, const TorsionSolution& sol) {
  const std::vector<double> coeffs = coefficients_of(sol);
  double worst = 0.0;
  for (const double x : interior_points(sol.u.size() - 1)) {
    const SeriesValue v = ChebyshevInterval::evaluate(coeffs, x);
    worst = std::max(worst, confhess_at(model, sol, x, v));
  }
  return worst;
}

bool hopf_check(const TorsionSolution& sol, double tol) {
  if (sol.du_ds.empty()) {
    return false;
  }
  return sol.du_ds.back() < -tol;
}

double torsion_interior_min(const TorsionSolution& sol) {
  const std::vector<double> coeffs = coefficients_of(sol);
  double lo = std::numeric_limits<double>::infinity();
  for (const double x : interior_points(sol.u.size() - 1)) {
    lo = std::min(lo, ChebyshevInterval::evaluate(coeffs, x).value);
  }
  return lo;
}

bool conformal_split_monotone(const WarpedProductModel& model, const TorsionSolution& sol) {
  const std::vector<double> coeffs = coefficients_of(sol);
  std::vector<double> phi;
  for (const double x : interior_points(sol.u.size() - 1)) {
    const Coefficients c = coefficients_at(model, sol.mapping, sol.s_inner, sol.s_hat, x);
    phi.push_back(ChebyshevInterval::evaluate(coeffs, x).value / std::sqrt(c.sq.value));
  }
  int sign = 0;
  for (std::size_t i = 1; i < phi.size(); ++i) {
    const double d = phi[i] - phi[i - 1];
    const int si = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (si == 0 || (sign != 0 && si != sign)) {
      return false;
    }
    sign = si;
  }
  return true;
}

double recover_horizon_datum(const WarpedProductModel& model, double s_hat, double lo, double hi,
                             std::size_t grid_size) {
  auto objective = [&](double datum) {
    TorsionOptions opt;
    opt.grid_size = grid_size;
    opt.horizon_datum = datum;
    return conformal_hessian_residual(model, solve_torsion_radial(model, s_hat, opt));
  };
  std::uintmax_t iterations = 200;
  const auto best = boost::math::tools::brent_find_minima(objective, lo, hi, 50, iterations);
  return best.first;
}

void write_torsion_csv(std::ostream& out, const WarpedProductModel& model,
                       const TorsionSolution& sol) {
  out << "s,u,du_ds,residual\n";
  const std::vector<double> coeffs = coefficients_of(sol);
  for (std::size_t j = 0; j < sol.u.size(); ++j) {
    double r = 0.0;
    const bool endpoint = j == 0 || j + 1 == sol.u.size();
    if (!endpoint) {
      r = equation_residual(model, sol, sol.x[j], ChebyshevInterval::evaluate(coeffs, sol.x[j]));
    }
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", sol.s[j], sol.u[j], sol.du_ds[j], r);
  }
}

}  // namespace substatic
