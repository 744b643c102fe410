#pragma once

// Quadrature and spectral bases shared by the hypersurface, flow and elliptic modules.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace substatic {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre rule with `count` points on [a, b] (Newton on P_count).
QuadratureRule gauss_legendre(std::size_t count, double a, double b);

struct SeriesValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Even cosine series u(θ) = Σ_{k=0}^{N} a_k cos kθ sampled on θ_j = πj/N.
/// These are the Chebyshev–Lobatto points in cos θ; u′(0) = u′(π) = 0 by construction.
class CosineSeries {
 public:
  explicit CosineSeries(std::size_t intervals);

  [[nodiscard]] std::size_t intervals() const { return n_; }
  [[nodiscard]] std::size_t size() const { return n_ + 1; }
  [[nodiscard]] double node(std::size_t j) const;
  [[nodiscard]] std::vector<double> nodes() const;

  [[nodiscard]] std::vector<double> coefficients(std::span<const double> values) const;
  [[nodiscard]] SeriesValue evaluate(std::span<const double> coeffs, double theta) const;

  /// Derivative matrices acting on nodal values.
  [[nodiscard]] const Eigen::MatrixXd& d1() const { return d1_; }
  [[nodiscard]] const Eigen::MatrixXd& d2() const { return d2_; }

 private:
  std::size_t n_;
  Eigen::MatrixXd analysis_;  // coefficients = analysis_ * values
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd d2_;
};

/// A cosine series together with a Gauss–Legendre rule on [0, π] and the
/// interpolation matrices from nodal values to the quadrature points.
class AngularDiscretization {
 public:
  AngularDiscretization(std::size_t intervals, std::size_t quadrature_points);

  [[nodiscard]] const CosineSeries& series() const { return series_; }
  [[nodiscard]] const QuadratureRule& rule() const { return rule_; }
  [[nodiscard]] const Eigen::MatrixXd& value_at_points() const { return v0_; }
  [[nodiscard]] const Eigen::MatrixXd& d1_at_points() const { return v1_; }
  [[nodiscard]] const Eigen::MatrixXd& d2_at_points() const { return v2_; }

 private:
  CosineSeries series_;
  QuadratureRule rule_;
  Eigen::MatrixXd v0_;
  Eigen::MatrixXd v1_;
  Eigen::MatrixXd v2_;
};

/// Shared, immutable discretization for `intervals` (cached, thread-safe).
/// Uses 2·(intervals + 1) Gauss–Legendre points.
std::shared_ptr<const AngularDiscretization> angular_discretization(std::size_t intervals);

/// Values shifted by their first entry. Differentiation matrices annihilate
/// constants only up to roundoff amplified by N², so derivatives are taken of
/// the shifted values.
inline Eigen::VectorXd centered(const Eigen::Ref<const Eigen::VectorXd>& v) {
  return v.array() - v(0);
}

/// Chebyshev–Lobatto collocation on [0, 1], nodes increasing: x_j = (1 − cos(πj/N))/2.
class ChebyshevInterval {
 public:
  explicit ChebyshevInterval(std::size_t intervals);

  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<double>& nodes() const { return nodes_; }
  [[nodiscard]] const Eigen::MatrixXd& d1() const { return d1_; }
  [[nodiscard]] const Eigen::MatrixXd& d2() const { return d2_; }

  /// Chebyshev coefficients of the interpolant in ξ = 2x − 1.
  [[nodiscard]] std::vector<double> coefficients(std::span<const double> values) const;
  /// Interpolant and its x-derivatives at x ∈ [0, 1].
  [[nodiscard]] static SeriesValue evaluate(std::span<const double> coeffs, double x);

 private:
  std::vector<double> nodes_;
  CosineSeries series_;
  Eigen::MatrixXd d1_;
  Eigen::MatrixXd d2_;
};

}  // namespace substatic
