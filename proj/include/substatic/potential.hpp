#pragma once

// Potential profiles f(s) of warped products g = ds⊗ds/f(s)² + s² g_N.
//
// Every profile is evaluated through f² and its s-derivatives: f² is smooth
// across a horizon {f = 0} while f itself behaves like √(s − s0) there.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace substatic {

/// f² together with (f²)′ and (f²)″ in the area-radius coordinate s.
struct SquaredPotential {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// f, f′, f″ in s.
struct PotentialValue {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
};

/// η(t) with its first two derivatives, t = s^{-n}.
struct EtaValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using SquaredPotentialFn = std::function<SquaredPotential(double)>;
using PotentialFn = std::function<PotentialValue(double)>;
using EtaFn = std::function<EtaValue(double)>;

/// f² = c − λ s² − 2 m s^{2−n}.
struct ClosedFormPotential {
  double lambda = 0.0;
  double m = 0.0;
};

/// Samples (s_i, f_i) interpolated by a monotone (PCHIP) cubic in f².
class TabulatedPotential {
 public:
  explicit TabulatedPotential(std::vector<std::pair<double, double>> samples);

  [[nodiscard]] SquaredPotential operator()(double s) const;
  [[nodiscard]] double front() const { return s_.front(); }
  [[nodiscard]] double back() const { return s_.back(); }
  [[nodiscard]] const std::vector<double>& abscissae() const { return s_; }
  [[nodiscard]] std::vector<std::pair<double, double>> samples() const;

 private:
  std::vector<double> s_;
  std::vector<double> f2_;
  std::vector<double> slope_;
};

struct CallablePotential {
  SquaredPotentialFn fn;
  std::string label;
};

class PotentialProfile {
 public:
  using Kind = std::variant<ClosedFormPotential, TabulatedPotential, CallablePotential>;

  static PotentialProfile closed_form(double lambda, double m);
  static PotentialProfile tabulated(std::vector<std::pair<double, double>> samples);
  /// Callable returning f² and its derivatives directly.
  static PotentialProfile callable(SquaredPotentialFn fn, std::string label);
  /// Callable with the f, f′, f″ contract. Only meaningful away from zeros of f.
  static PotentialProfile callable_f(PotentialFn fn, std::string label);
  /// f² = c + s² η(s^{-n}).
  static PotentialProfile from_eta(double c_pot, int n, EtaFn eta, std::string label);

  [[nodiscard]] SquaredPotential squared(double s, double c_pot, int n) const;

  /// f² at s = root + y where `root` is a zero of f². Closed-form profiles
  /// evaluate the increment f²(root + y) − f²(root) without cancellation and
  /// report f²(root) as exactly zero.
  [[nodiscard]] SquaredPotential squared_from_root(double root, double y, double c_pot,
                                                   int n) const;

  [[nodiscard]] const ClosedFormPotential* as_closed_form() const {
    return std::get_if<ClosedFormPotential>(&kind_);
  }
  [[nodiscard]] const TabulatedPotential* as_tabulated() const {
    return std::get_if<TabulatedPotential>(&kind_);
  }
  [[nodiscard]] std::string_view kind_name() const;
  [[nodiscard]] const Kind& kind() const { return kind_; }

 private:
  explicit PotentialProfile(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Largest zero of f² inside `bracket` such that f² > 0 on (root, bracket.second].
/// Throws DomainError when f² has no zero there.
double horizon_radius(const PotentialProfile& profile, double c_pot, int n,
                      std::pair<double, double> bracket);

/// f, f′, f″ from the squared triple; f′ and f″ are infinite where f² = 0.
PotentialValue potential_from_squared(const SquaredPotential& sq);

}  // namespace substatic
