#pragma once

// Test-only oracles, kept independent of the library's implementation paths.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using poly = std::vector<double>;  // p[k] multiplies x^k

inline poly pmul(const poly& a, const poly& b, std::size_t n) {
  poly r(n + 1, 0.0);
  for (std::size_t i = 0; i <= n && i < a.size(); ++i)
    for (std::size_t j = 0; i + j <= n && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline poly padd(poly a, const poly& b, double s = 1.0) {
  if (a.size() < b.size()) a.resize(b.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] += s * b[k];
  return a;
}

inline poly pderiv(const poly& a) {
  poly r(a.size() > 1 ? a.size() - 1 : 1, 0.0);
  for (std::size_t k = 1; k < a.size(); ++k) r[k - 1] = double(k) * a[k];
  return r;
}

// Reciprocal of a unit series (a[0] != 0) to order n.
inline poly pinv(const poly& a, std::size_t n) {
  poly r(n + 1, 0.0);
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k <= n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * r[k - j];
    r[k] = -s / a[0];
  }
  return r;
}

inline poly psin(const poly& a, std::size_t n) {  // a[0] must be 0
  poly r(n + 1, 0.0), p = a;
  double fact = 1.0;
  int sign = 1;
  for (std::size_t m = 1; m <= n; m += 2) {
    r = padd(r, p, double(sign) / fact);
    p = pmul(pmul(p, a, n), a, n);
    fact *= double((m + 1) * (m + 2));
    sign = -sign;
  }
  return r;
}

inline poly pcos(const poly& a, std::size_t n) {
  poly r(n + 1, 0.0), p(1, 1.0);
  double fact = 1.0;
  int sign = 1;
  for (std::size_t m = 0; m <= n; m += 2) {
    r = padd(r, p, double(sign) / fact);
    p = pmul(pmul(p, a, n), a, n);
    fact *= double((m + 1) * (m + 2));
    sign = -sign;
  }
  return r;
}

// Residual coefficients of phi'' - (phi'^2-1) cot(phi) - (1-phi')/x for a
// candidate expansion phi = sum_{k>=1} c_k x^k.  cot(phi) is expanded as
// cos(phi) * [x * (sin(phi)/x)]^{-1}; the 1/x factors cancel against the x in
// phi = x(1 + ...), so the residual is a plain power series whose k-th entry
// multiplies x^k, starting at k = 0.
inline poly ode_residual_series(const poly& phi, std::size_t n) {
  poly dphi = pderiv(phi), d2phi = pderiv(dphi);
  poly s = psin(phi, n + 2), c = pcos(phi, n + 2);
  // u = sin(phi)/x is a unit series
  poly u(n + 2, 0.0);
  for (std::size_t k = 0; k + 1 < s.size() && k < u.size(); ++k) u[k] = s[k + 1];
  poly uinv = pinv(u, n + 2);
  poly sq = pmul(dphi, dphi, n + 2);
  sq = padd(sq, poly{1.0}, -1.0);                 // phi'^2 - 1
  poly cot_term = pmul(pmul(sq, c, n + 2), uinv, n + 2);  // (phi'^2-1) cos * (x/sin)
  // (phi'^2-1) cot = cot_term / x; cot_term[0] vanishes when c1 = 1, so the
  // shift below is exact.  Same for (1-phi')/x via one_minus[0] = 1 - c1.
  poly cot_shift(n + 2, 0.0);
  for (std::size_t k = 0; k + 1 < cot_term.size() && k < cot_shift.size(); ++k)
    cot_shift[k] = cot_term[k + 1];
  poly one_minus(n + 3, 0.0);
  one_minus[0] = 1.0;
  one_minus = padd(one_minus, dphi, -1.0);
  poly om_shift(n + 2, 0.0);
  for (std::size_t k = 0; k + 1 < one_minus.size() && k < om_shift.size(); ++k)
    om_shift[k] = one_minus[k + 1];

  poly r = d2phi;
  r.resize(n + 1, 0.0);
  r = padd(r, cot_shift, -1.0);
  r = padd(r, om_shift, -1.0);
  // the x^{-1} coefficients: cot_term[0] + one_minus[0] with one_minus[0]=... both zero
  r.resize(n + 1, 0.0);
  return r;
}

// ---------------------------------------------------------------------------
// Weierstrass-product evaluation of ln Gamma with an analytic tail bound:
//   ln Gamma(z) = -gamma z - Log z + sum_{k=1..K} [z/k - Log(1 + z/k)] + tail,
//   tail = (X+z) Log(1 + z/X) - z  at X = K + 1/2   (midpoint integral rule;
//   the neglected correction is ~|z|^2/(24 K^3)).
// Valid off the negative real axis for |z| < K.
// ---------------------------------------------------------------------------
inline std::complex<double> log_gamma_product(std::complex<double> z, int K = 200000) {
  const double euler_gamma = 0.57721566490153286060651209008240;
  std::complex<double> sum = 0.0, comp = 0.0;  // Kahan
  for (int k = 1; k <= K; ++k) {
    const std::complex<double> t = z / double(k) - std::log(1.0 + z / double(k));
    const std::complex<double> y = t - comp;
    const std::complex<double> s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  const double X = K + 0.5;
  const std::complex<double> tail = (X + z) * std::log(1.0 + z / X) - z;
  return -euler_gamma * z - std::log(z) + sum + tail;
}

}  // namespace oracle
