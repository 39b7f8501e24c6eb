#include "painleve/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace painleve {

PowerSeries PowerSeries::derivative() const {
  PowerSeries d(order());
  for (std::size_t k = 1; k < c_.size(); ++k) d.c_[k - 1] = static_cast<double>(k) * c_[k];
  d.c_[order()] = 0.0;
  return d;
}

PowerSeries PowerSeries::mul(const PowerSeries& o) const {
  PowerSeries r(order());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const std::size_t jmax = c_.size() - 1 - i;
    for (std::size_t j = 0; j <= std::min(jmax, o.c_.size() - 1); ++j)
      r.c_[i + j] += c_[i] * o.c_[j];
  }
  return r;
}

PowerSeries PowerSeries::add(const PowerSeries& o, double scale) const {
  PowerSeries r(*this);
  for (std::size_t k = 0; k < std::min(c_.size(), o.c_.size()); ++k) r.c_[k] += scale * o.c_[k];
  return r;
}

// sin/cos by summing the Taylor series of sin/cos composed with *this.
// Requires a zero constant term so that powers gain at least one order each.
PowerSeries PowerSeries::sin_of() const {
  const std::size_t n = order();
  PowerSeries result(n), power(*this);
  double fact = 1.0;
  int sign = 1;
  for (std::size_t m = 1; m <= n; m += 2) {
    result = result.add(power, static_cast<double>(sign) / fact);
    power = power.mul(*this).mul(*this);
    fact *= static_cast<double>((m + 1) * (m + 2));
    sign = -sign;
  }
  return result;
}

PowerSeries PowerSeries::cos_of() const {
  const std::size_t n = order();
  PowerSeries result(n), power(n);
  power[0] = 1.0;
  double fact = 1.0;
  int sign = 1;
  for (std::size_t m = 0; m <= n; m += 2) {
    result = result.add(power, static_cast<double>(sign) / fact);
    power = power.mul(*this).mul(*this);
    fact *= static_cast<double>((m + 1) * (m + 2));
    sign = -sign;
  }
  return result;
}

double PowerSeries::eval(double h) const {
  double v = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) v = v * h + c_[k];
  return v;
}

double PowerSeries::eval_derivative(double h) const {
  double v = 0.0;
  for (std::size_t k = c_.size(); k-- > 1;) v = v * h + static_cast<double>(k) * c_[k];
  return v;
}

namespace {

// Desingularized defect of a candidate expansion phi(x) = sum c_k x^k:
//   G = x sin(phi) phi'' - x (phi'^2 - 1) cos(phi) - (1 - phi') sin(phi).
PowerSeries origin_defect(const PowerSeries& phi) {
  const std::size_t n = phi.order();
  PowerSeries x(n);
  x[1] = 1.0;
  PowerSeries one(n);
  one[0] = 1.0;
  const PowerSeries dphi = phi.derivative();
  const PowerSeries d2phi = dphi.derivative();
  const PowerSeries s = phi.sin_of();
  const PowerSeries c = phi.cos_of();
  const PowerSeries sq = dphi.mul(dphi).add(one, -1.0);  // phi'^2 - 1
  PowerSeries g = x.mul(s).mul(d2phi);
  g = g.add(x.mul(sq).mul(c), -1.0);
  g = g.add(one.add(dphi, -1.0).mul(s), -1.0);
  return g;
}

}  // namespace

SeriesExpansion series_coefficients(double a, int order) {
  if (order < 3) throw std::invalid_argument("series_coefficients: order must be >= 3");
  const std::size_t work = static_cast<std::size_t>(order) + 2;
  PowerSeries phi(work);
  phi[1] = 1.0;
  phi[2] = -a;
  // Coefficient m is fixed by the x^m coefficient of the defect; the linear
  // sensitivity is probed numerically (it equals m(m-2), nonzero for m >= 3).
  for (int m = 3; m <= order; ++m) {
    phi[static_cast<std::size_t>(m)] = 0.0;
    const double r0 = origin_defect(phi)[static_cast<std::size_t>(m)];
    phi[static_cast<std::size_t>(m)] = 1.0;
    const double r1 = origin_defect(phi)[static_cast<std::size_t>(m)];
    const double slope = r1 - r0;
    phi[static_cast<std::size_t>(m)] = -r0 / slope;
  }

  SeriesExpansion out;
  out.a = a;
  out.order = order;
  out.coeffs.resize(static_cast<std::size_t>(order));
  for (int k = 1; k <= order; ++k) out.coeffs[static_cast<std::size_t>(k - 1)] = phi[static_cast<std::size_t>(k)];

  // Trust radius: last retained term below 1e-14 of the leading term.
  const double cn = std::fabs(out.coeffs.back());
  if (cn == 0.0) {
    out.radius_hint = 1.0;
  } else {
    out.radius_hint = std::min(1.0, std::pow(1e-14 / cn, 1.0 / (order - 1)));
  }
  return out;
}

double SeriesExpansion::eval(double x) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
  return v * x;
}

double SeriesExpansion::eval_derivative(double x) const {
  double v = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + static_cast<double>(k + 1) * coeffs[k];
  return v;
}

double SeriesExpansion::tail(double x) const {
  return std::fabs(coeffs.back()) * std::pow(x, order);
}

SeedValue eval_seed(const SeriesExpansion& series, double x0) {
  if (!(x0 > 0.0) || x0 > series.radius_hint)
    throw std::out_of_range("eval_seed: x0 outside trust radius (0, " +
                            format17(series.radius_hint) + "]");
  SeedValue v;
  v.phi = series.eval(x0);
  v.dphi = series.eval_derivative(x0);
  v.tail_phi = series.tail(x0);
  v.tail_dphi = series.order * std::fabs(series.coeffs.back()) * std::pow(x0, series.order - 1);
  return v;
}

PowerSeries series_residual(const SeriesExpansion& series) {
  const std::size_t work = 2 * static_cast<std::size_t>(series.order) + 6;
  PowerSeries phi(work);
  for (int k = 1; k <= series.order; ++k)
    phi[static_cast<std::size_t>(k)] = series.coeffs[static_cast<std::size_t>(k - 1)];
  return origin_defect(phi);
}

}  // namespace painleve
