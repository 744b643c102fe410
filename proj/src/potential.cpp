#include "substatic/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "substatic/errors.hpp"

namespace substatic {
namespace {

// Fritsch–Butland weighted harmonic mean, one-sided shape-preserving ends.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      d[k] = 0.0;
      continue;
    }
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  auto end_slope = [](double h0, double h1, double del0, double del1) {
    double dd = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (dd * del0 <= 0.0) {
      dd = 0.0;
    } else if (del0 * del1 <= 0.0 && std::abs(dd) > std::abs(3.0 * del0)) {
      dd = 3.0 * del0;
    }
    return dd;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

SquaredPotential closed_form_squared(const ClosedFormPotential& p, double s, double c, int n) {
  const double nn = static_cast<double>(n);
  SquaredPotential out;
  out.value = c - p.lambda * s * s;
  out.d1 = -2.0 * p.lambda * s;
  out.d2 = -2.0 * p.lambda;
  if (p.m != 0.0) {
    // The mass term is singular at s = 0; massless profiles stay regular there.
    const double pow_2n = std::pow(s, 2.0 - nn);
    out.value -= 2.0 * p.m * pow_2n;
    out.d1 -= 2.0 * p.m * (2.0 - nn) * pow_2n / s;
    out.d2 -= 2.0 * p.m * (2.0 - nn) * (1.0 - nn) * pow_2n / (s * s);
  }
  return out;
}

}  // namespace

TabulatedPotential::TabulatedPotential(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 3) {
    throw ModelError("tabulated potential needs at least 3 samples");
  }
  s_.reserve(samples.size());
  f2_.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [s, f] = samples[i];
    if (!std::isfinite(s) || !std::isfinite(f)) {
      throw ModelError("tabulated potential contains a non-finite sample");
    }
    if (i > 0 && !(s > s_.back())) {
      throw ModelError("tabulated potential abscissae must be strictly increasing");
    }
    if (f < 0.0) {
      throw ModelError("tabulated potential must be nonnegative");
    }
    s_.push_back(s);
    f2_.push_back(f * f);
  }
  slope_ = pchip_slopes(s_, f2_);
}

SquaredPotential TabulatedPotential::operator()(double s) const {
  const double tol = 1e-12 * (s_.back() - s_.front());
  if (s < s_.front() - tol || s > s_.back() + tol) {
    throw DomainError("s outside the tabulated range");
  }
  s = std::clamp(s, s_.front(), s_.back());
  auto it = std::upper_bound(s_.begin(), s_.end(), s);
  std::size_t k = static_cast<std::size_t>(std::distance(s_.begin(), it));
  k = std::clamp<std::size_t>(k, 1, s_.size() - 1) - 1;
  const double h = s_[k + 1] - s_[k];
  const double t = (s - s_[k]) / h;
  const double y0 = f2_[k];
  const double y1 = f2_[k + 1];
  const double m0 = slope_[k] * h;
  const double m1 = slope_[k + 1] * h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  SquaredPotential out;
  out.value = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
              (t3 - t2) * m1;
  out.d1 = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
            (3 * t2 - 2 * t) * m1) /
           h;
  out.d2 = ((12 * t - 6) * y0 + (6 * t - 4) * m0 + (-12 * t + 6) * y1 + (6 * t - 2) * m1) /
           (h * h);
  return out;
}

std::vector<std::pair<double, double>> TabulatedPotential::samples() const {
  std::vector<std::pair<double, double>> out;
  out.reserve(s_.size());
  for (std::size_t i = 0; i < s_.size(); ++i) {
    out.emplace_back(s_[i], std::sqrt(std::max(f2_[i], 0.0)));
  }
  return out;
}

PotentialProfile PotentialProfile::closed_form(double lambda, double m) {
  return PotentialProfile(ClosedFormPotential{lambda, m});
}

PotentialProfile PotentialProfile::tabulated(std::vector<std::pair<double, double>> samples) {
  return PotentialProfile(TabulatedPotential(std::move(samples)));
}

PotentialProfile PotentialProfile::callable(SquaredPotentialFn fn, std::string label) {
  return PotentialProfile(CallablePotential{std::move(fn), std::move(label)});
}

PotentialProfile PotentialProfile::callable_f(PotentialFn fn, std::string label) {
  auto squared = [fn = std::move(fn)](double s) {
    const PotentialValue v = fn(s);
    return SquaredPotential{v.f * v.f, 2.0 * v.f * v.df, 2.0 * (v.df * v.df + v.f * v.d2f)};
  };
  return callable(std::move(squared), std::move(label));
}

PotentialProfile PotentialProfile::from_eta(double c_pot, int n, EtaFn eta, std::string label) {
  auto squared = [c_pot, n, eta = std::move(eta)](double s) {
    const double nn = static_cast<double>(n);
    const double s_mn = std::pow(s, -nn);
    const EtaValue e = eta(s_mn);
    SquaredPotential out;
    out.value = c_pot + s * s * e.value;
    out.d1 = 2.0 * s * e.value - nn * s * s_mn * e.d1;
    out.d2 = 2.0 * e.value + nn * (nn - 3.0) * s_mn * e.d1 + nn * nn * s_mn * s_mn * e.d2;
    return out;
  };
  return callable(std::move(squared), std::move(label));
}

SquaredPotential PotentialProfile::squared(double s, double c_pot, int n) const {
  return std::visit(
      [&](const auto& k) -> SquaredPotential {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ClosedFormPotential>) {
          return closed_form_squared(k, s, c_pot, n);
        } else if constexpr (std::is_same_v<K, TabulatedPotential>) {
          return k(s);
        } else {
          return k.fn(s);
        }
      },
      kind_);
}

SquaredPotential PotentialProfile::squared_from_root(double root, double y, double c_pot,
                                                     int n) const {
  const double s = root + y;
  SquaredPotential out = squared(s, c_pot, n);
  if (const auto* cf = as_closed_form()) {
    const double nn = static_cast<double>(n);
    out.value = -cf->lambda * y * (2.0 * root + y) -
                2.0 * cf->m * std::pow(root, 2.0 - nn) *
                    std::expm1((2.0 - nn) * std::log1p(y / root));
  }
  return out;
}

std::string_view PotentialProfile::kind_name() const {
  switch (kind_.index()) {
    case 0:
      return "closed_form";
    case 1:
      return "tabulated";
    default:
      return "callable";
  }
}

double horizon_radius(const PotentialProfile& profile, double c_pot, int n,
                      std::pair<double, double> bracket) {
  auto [lo, hi] = bracket;
  if (!(lo < hi) || lo <= 0.0) {
    throw DomainError("horizon bracket must satisfy 0 < lo < hi");
  }
  auto f2 = [&](double s) { return profile.squared(s, c_pot, n).value; };
  if (!(f2(hi) > 0.0)) {
    throw DomainError("f² is not positive at the outer end of the horizon bracket");
  }
  constexpr int kScan = 4096;
  const double h = (hi - lo) / kScan;
  double b = hi;
  double fb = f2(b);
  for (int i = kScan - 1; i >= 0; --i) {
    const double a = lo + h * i;
    const double fa = f2(a);
    if (fa == 0.0) {
      return a;
    }
    if (fa < 0.0) {
      boost::uintmax_t iters = 200;
      const auto tol = boost::math::tools::eps_tolerance<double>(52);
      const auto [r0, r1] = boost::math::tools::toms748_solve(f2, a, b, fa, fb, tol, iters);
      const double root = 0.5 * (r0 + r1);
      // Prefer the endpoint whose f² is closest to zero.
      double best = root;
      for (double cand : {r0, r1}) {
        if (std::abs(f2(cand)) < std::abs(f2(best))) {
          best = cand;
        }
      }
      if (std::abs(f2(best)) >= 1e-12) {
        throw SolverError("horizon root did not converge to |f²| < 1e-12");
      }
      return best;
    }
    b = a;
    fb = fa;
  }
  throw DomainError("f² has no zero inside the horizon bracket");
}

PotentialValue potential_from_squared(const SquaredPotential& sq) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  PotentialValue out;
  if (sq.value <= 0.0) {
    out.f = 0.0;
    out.df = sq.d1 > 0.0 ? inf : (sq.d1 < 0.0 ? -inf : 0.0);
    out.d2f = -inf;
    return out;
  }
  out.f = std::sqrt(sq.value);
  out.df = 0.5 * sq.d1 / out.f;
  out.d2f = (0.5 * sq.d2 - out.df * out.df) / out.f;
  return out;
}

}  // namespace substatic
