#include "substatic/spectral.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "substatic/errors.hpp"

namespace substatic {
namespace {

std::vector<double> chebyshev_derivative(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) {
    b[k - 1] = (k + 1 < b.size() ? b[k + 1] : 0.0) + 2.0 * static_cast<double>(k) * c[k];
  }
  b[0] *= 0.5;
  b.resize(n);
  if (n > 0) {
    b[n - 1] = 0.0;
  }
  return b;
}

double clenshaw(std::span<const double> c, double xi) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) {
    const double b0 = 2.0 * xi * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return xi * b1 - b2 + c[0];
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t count, double a, double b) {
  if (count == 0) {
    throw DomainError("Gauss–Legendre rule needs at least one point");
  }
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double nn = static_cast<double>(count);
  for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= count; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = nn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[count - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[count - 1 - i] = half * w;
  }
  return rule;
}

CosineSeries::CosineSeries(std::size_t intervals) : n_(intervals) {
  if (intervals < 2) {
    throw DomainError("cosine series needs at least two intervals");
  }
  const std::size_t m = n_ + 1;
  const double nn = static_cast<double>(n_);
  analysis_.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const double ck = (k == 0 || k == n_) ? 0.5 : 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double cj = (j == 0 || j == n_) ? 0.5 : 1.0;
      analysis_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          (2.0 / nn) * ck * cj * std::cos(static_cast<double>(k * j) * std::numbers::pi / nn);
    }
  }
  Eigen::MatrixXd s1(m, m);
  Eigen::MatrixXd s2(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const double th = node(i);
    for (std::size_t k = 0; k < m; ++k) {
      const double kk = static_cast<double>(k);
      s1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = -kk * std::sin(kk * th);
      s2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = -kk * kk * std::cos(kk * th);
    }
  }
  d1_ = s1 * analysis_;
  d2_ = s2 * analysis_;
}

double CosineSeries::node(std::size_t j) const {
  return std::numbers::pi * static_cast<double>(j) / static_cast<double>(n_);
}

std::vector<double> CosineSeries::nodes() const {
  std::vector<double> out(size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = node(j);
  }
  return out;
}

std::vector<double> CosineSeries::coefficients(std::span<const double> values) const {
  if (values.size() != size()) {
    throw DomainError("cosine series: value count does not match the node count");
  }
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::VectorXd c = analysis_ * v;
  return {c.data(), c.data() + c.size()};
}

SeriesValue CosineSeries::evaluate(std::span<const double> coeffs, double theta) const {
  SeriesValue out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double c = std::cos(kk * theta);
    out.value += coeffs[k] * c;
    out.d1 -= kk * coeffs[k] * std::sin(kk * theta);
    out.d2 -= kk * kk * coeffs[k] * c;
  }
  return out;
}

AngularDiscretization::AngularDiscretization(std::size_t intervals, std::size_t quadrature_points)
    : series_(intervals), rule_(gauss_legendre(quadrature_points, 0.0, std::numbers::pi)) {
  const std::size_t m = series_.size();
  const auto q = static_cast<Eigen::Index>(rule_.nodes.size());
  Eigen::MatrixXd c0(q, static_cast<Eigen::Index>(m));
  Eigen::MatrixXd c1(q, static_cast<Eigen::Index>(m));
  Eigen::MatrixXd c2(q, static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < q; ++i) {
    const double th = rule_.nodes[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < m; ++k) {
      const double kk = static_cast<double>(k);
      const auto kc = static_cast<Eigen::Index>(k);
      c0(i, kc) = std::cos(kk * th);
      c1(i, kc) = -kk * std::sin(kk * th);
      c2(i, kc) = -kk * kk * std::cos(kk * th);
    }
  }
  // Recover the analysis operator through the identity on nodal values.
  Eigen::MatrixXd analysis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> unit(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    unit.assign(m, 0.0);
    unit[j] = 1.0;
    const std::vector<double> col = series_.coefficients(unit);
    for (std::size_t k = 0; k < m; ++k) {
      analysis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = col[k];
    }
  }
  v0_ = c0 * analysis;
  v1_ = c1 * analysis;
  v2_ = c2 * analysis;
}

std::shared_ptr<const AngularDiscretization> angular_discretization(std::size_t intervals) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const AngularDiscretization>> cache;
  const std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(intervals);
  if (it != cache.end()) {
    return it->second;
  }
  auto disc = std::make_shared<const AngularDiscretization>(intervals, 2 * (intervals + 1));
  cache.emplace(intervals, disc);
  return disc;
}

ChebyshevInterval::ChebyshevInterval(std::size_t intervals) : series_(intervals) {
  const std::size_t m = intervals + 1;
  nodes_.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    nodes_[j] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(intervals)));
  }
  std::vector<double> w(m);
  for (std::size_t j = 0; j < m; ++j) {
    w[j] = ((j % 2 == 0) ? 1.0 : -1.0) * ((j == 0 || j == intervals) ? 0.5 : 1.0);
  }
  d1_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) {
        continue;
      }
      const double v = (w[j] / w[i]) / (nodes_[i] - nodes_[j]);
      d1_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      diag -= v;
    }
    d1_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
  }
  d2_ = d1_ * d1_;
}

std::vector<double> ChebyshevInterval::coefficients(std::span<const double> values) const {
  // x_j = (1 − cos θ_j)/2 ⇔ ξ_j = cos θ_{N−j}.
  std::vector<double> reversed(values.rbegin(), values.rend());
  return series_.coefficients(reversed);
}

SeriesValue ChebyshevInterval::evaluate(std::span<const double> coeffs, double x) {
  const double xi = 2.0 * x - 1.0;
  const std::vector<double> c1 = chebyshev_derivative(coeffs);
  const std::vector<double> c2 = chebyshev_derivative(c1);
  return {clenshaw(coeffs, xi), 2.0 * clenshaw(c1, xi), 4.0 * clenshaw(c2, xi)};
}

}  // namespace substatic
