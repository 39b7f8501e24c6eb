#pragma once

// Power-series seeding of the initial value problem
//   phi'' = (phi'^2 - 1) cot(phi) + (1 - phi')/x,   phi = x - a x^2 + ...
// near the regular-singular origin.  The expansion coefficients are obtained
// by matching powers in the desingularized form
//   x sin(phi) phi'' - x (phi'^2 - 1) cos(phi) - (1 - phi') sin(phi) = 0,
// which is polynomial in the series data and leaves exactly one free
// parameter (the x^2 coefficient, -a).

#include <vector>

#include "painleve/common.hpp"

namespace painleve {

/// Dense truncated power series about a base point; c[k] multiplies h^k.
class PowerSeries {
 public:
  explicit PowerSeries(std::size_t order) : c_(order + 1, 0.0) {}
  PowerSeries(std::initializer_list<double> coeffs) : c_(coeffs) {}

  std::size_t order() const { return c_.size() - 1; }
  double& operator[](std::size_t k) { return c_[k]; }
  double operator[](std::size_t k) const { return c_[k]; }

  PowerSeries derivative() const;
  PowerSeries mul(const PowerSeries& o) const;
  PowerSeries add(const PowerSeries& o, double scale = 1.0) const;
  /// sin/cos of a series with zero constant term.
  PowerSeries sin_of() const;
  PowerSeries cos_of() const;

  double eval(double h) const;             // Horner
  double eval_derivative(double h) const;

 private:
  std::vector<double> c_;
};

/// Origin expansion of the solution for one boundary parameter a.
struct SeriesExpansion {
  double a = 0.0;
  std::vector<double> coeffs;   // coeffs[k-1] multiplies x^k, k = 1..order
  int order = 0;
  double radius_hint = 0.0;

  double eval(double x) const;
  double eval_derivative(double x) const;
  /// Magnitude of the last retained term at x (tail estimate).
  double tail(double x) const;
};

/// Coefficients c_1..c_N with c_1 = 1, c_2 = -a and the rest forced by the
/// equation.  Throws std::invalid_argument for N < 3.
SeriesExpansion series_coefficients(double a, int order);

struct SeedValue {
  double phi = 0.0;
  double dphi = 0.0;
  double tail_phi = 0.0;   // |last retained term| at x0
  double tail_dphi = 0.0;
};

/// Evaluate the expansion and its derivative at 0 < x0 <= radius_hint.
/// Throws std::out_of_range when x0 is outside the trust radius.
SeedValue eval_seed(const SeriesExpansion& series, double x0);

/// Residual of the truncated expansion as a power series (coefficients of the
/// desingularized form divided by the leading x^2 behaviour are reported as
/// the h^k coefficients of x sin(phi)(phi'' - rhs)).  Used by the
/// residual-order checks; computed at working order 2N+6.
PowerSeries series_residual(const SeriesExpansion& series);

}  // namespace painleve
