#include "painleve/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace painleve {

namespace {

// B_{2j} / (2j (2j-1)) for the Stirling series of ln Gamma.
constexpr double kStirling[] = {
    1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,
    -1.0 / 1680.0,        1.0 / 1188.0,         -691.0 / 360360.0,
    1.0 / 156.0,          -3617.0 / 122400.0,   43867.0 / 244188.0,
};

constexpr double kLnSqrt2Pi = 0.91893853320467274178032973640562;

bool near_pole(cplx z) {
  if (std::fabs(z.imag()) > 1e-13) return false;
  const double r = std::round(z.real());
  return r <= 0.0 && std::fabs(z.real() - r) < 1e-13;
}

}  // namespace

cplx sin_pi(cplx z) {
  const double n = std::round(z.real());
  const double r = z.real() - n;
  const double y = z.imag();
  const double sign = (std::fmod(std::fabs(n), 2.0) < 0.5) ? 1.0 : -1.0;
  return sign * cplx(std::sin(kPi * r) * std::cosh(kPi * y),
                     std::cos(kPi * r) * std::sinh(kPi * y));
}

cplx log_gamma(cplx z) {
  if (near_pole(z)) throw std::domain_error("log_gamma: pole at nonpositive integer");
  // Lift with ln Gamma(z) = ln Gamma(z+1) - Log z (principal logs; the
  // identity holds branch-exactly on the cut plane) until the Stirling
  // series applies.
  cplx shift = 0.0;
  cplx w = z;
  while (w.real() < 0.5 || std::abs(w) < 12.0) {
    shift += std::log(w);
    w += 1.0;
  }
  const cplx iw = 1.0 / w;
  const cplx iw2 = iw * iw;
  cplx s = 0.0;
  cplx p = iw;
  for (double g : kStirling) {
    s += g * p;
    p *= iw2;
  }
  return (w - 0.5) * std::log(w) - w + kLnSqrt2Pi + s - shift;
}

double arg_gamma(cplx z) { return log_gamma(z).imag(); }

cplx reciprocal_gamma(cplx z) {
  if (z.real() < 0.5) {
    // 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi, regular through the poles
    return sin_pi(z) * std::exp(log_gamma(1.0 - z)) / kPi;
  }
  return std::exp(-log_gamma(z));
}

namespace {

constexpr int kMaxTerms = 600;

// Kummer series M(a, b, w) = sum (a)_k/(b)_k w^k/k!.
cplx kummer_m(cplx a, cplx b, cplx w) {
  cplx term = 1.0, sum = 1.0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + double(k)) / (b + double(k)) * w / double(k + 1);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > 4) break;
  }
  return sum;
}

// Series evaluation of D_nu: even/odd Weber solutions with gamma connection
// coefficients.  When Re(z^2) < 0 the Kummer transformation keeps the series
// from alternating destructively.
cplx pcf_series(cplx nu, cplx z) {
  const cplx z2h = 0.5 * z * z;
  const cplx pre = std::sqrt(kPi) * std::exp(0.5 * nu * std::log(cplx(2.0)));
  const cplx ce = reciprocal_gamma(0.5 * (1.0 - nu));
  const cplx co = reciprocal_gamma(-0.5 * nu);
  cplx even, odd;
  if (z2h.real() < 0.0) {
    even = std::exp(0.25 * z * z) * kummer_m(0.5 * (1.0 + nu), 0.5, -z2h);
    odd = std::exp(0.25 * z * z) * kummer_m(1.0 + 0.5 * nu, 1.5, -z2h);
  } else {
    even = std::exp(-0.25 * z * z) * kummer_m(-0.5 * nu, 0.5, z2h);
    odd = std::exp(-0.25 * z * z) * kummer_m(0.5 * (1.0 - nu), 1.5, z2h);
  }
  return pre * (ce * even - std::sqrt(2.0) * z * co * odd);
}

// Inverse-power sums of the large-z expansion.
// dominant:    sum_s (-1)^s (-nu)_{2s} / (s! (2 z^2)^s)
// subdominant: sum_s        (nu+1)_{2s} / (s! (2 z^2)^s)
cplx pcf_asym_sum(cplx base, cplx z, bool alternating) {
  const cplx r = 1.0 / (2.0 * z * z);
  cplx term = 1.0, sum = 1.0;
  double prev = 1e300;
  for (int s = 0; s < 60; ++s) {
    const cplx rise = (base + double(2 * s)) * (base + double(2 * s + 1));
    term *= rise * r / double(s + 1);
    if (alternating) term = -term;
    const double mag = std::abs(term);
    if (mag > prev) break;  // past the optimal truncation point
    sum += term;
    prev = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

cplx powc(cplx base_log, cplx expo) { return std::exp(base_log * expo); }

// Taylor-step marching for the Weber equation D'' = (z^2/4 - nu - 1/2) D.
// Stable toward the origin along rays with |arg z| <= pi/4 where D_nu grows
// inward.
void weber_march(cplx nu, cplx& f, cplx& fp, cplx z0, cplx z1) {
  const int kOrder = 30;
  cplx pos = z0;
  const cplx dir = (z1 - z0) / std::abs(z1 - z0);
  double remaining = std::abs(z1 - z0);
  while (remaining > 0.0) {
    const double q0mag = std::abs(0.25 * pos * pos - nu - 0.5);
    const double hmag = std::min({remaining, 1.0, 5.0 / std::sqrt(q0mag + 1.0)});
    const cplx h = dir * hmag;
    const cplx q0 = 0.25 * pos * pos - nu - 0.5;
    const cplx q1 = 0.5 * pos;
    const cplx q2 = 0.25;
    cplx a[kOrder + 1];
    a[0] = f;
    a[1] = fp;
    for (int m = 0; m + 2 <= kOrder; ++m) {
      cplx rhs = q0 * a[m];
      if (m >= 1) rhs += q1 * a[m - 1];
      if (m >= 2) rhs += q2 * a[m - 2];
      a[m + 2] = rhs / double((m + 1) * (m + 2));
    }
    cplx vf = a[kOrder], vp = double(kOrder) * a[kOrder];
    for (int m = kOrder - 1; m >= 0; --m) {
      vf = vf * h + a[m];
      if (m >= 1) vp = vp * h + double(m) * a[m];
    }
    f = vf;
    fp = vp;
    pos += h;
    remaining -= hmag;
  }
}

}  // namespace

cplx pcf_D(cplx nu, cplx z) {
  if (std::fabs(0.25 * (z * z).real()) > 700.0)
    throw std::overflow_error("pcf_D: exponential factor overflows");
  const double r = std::abs(z);
  const double th = std::fabs(std::arg(z));
  if (r <= 4.5) return pcf_series(nu, z);
  if (th > 0.75 * kPi - 0.05) {
    // Reflect into the principal sector:
    // D_nu(z) = e^{+-nu pi i} D_nu(-z) + sqrt(2 pi)/Gamma(-nu) e^{+-(nu+1) pi i/2} D_{-nu-1}(-+iz)
    const cplx i(0.0, 1.0);
    const double sg = (z.imag() >= 0.0) ? 1.0 : -1.0;
    const cplx c1 = std::exp(sg * nu * kPi * i);
    const cplx c2 = std::sqrt(2.0 * kPi) * reciprocal_gamma(-nu) *
                    std::exp(sg * (nu + 1.0) * 0.5 * kPi * i);
    return c1 * pcf_D(nu, -z) + c2 * pcf_D(-nu - 1.0, -sg * i * z);
  }
  if (r >= 15.0) {
    return powc(std::log(z), nu) * std::exp(-0.25 * z * z) * pcf_asym_sum(-nu, z, true);
  }
  if (th > 0.25 * kPi) return pcf_series(nu, z);
  // Seed on the same ray at |z| = 15 and march inward.
  const cplx seed_at = z * (15.0 / r);
  cplx f = powc(std::log(seed_at), nu) * std::exp(-0.25 * seed_at * seed_at) *
           pcf_asym_sum(-nu, seed_at, true);
  // derivative of the leading asymptotics: D' ~ (nu/z - z/2) D, refined by the
  // exact relation D'_nu(z) = -z/2 D_nu + nu D_{nu-1}
  cplx fm = powc(std::log(seed_at), nu - 1.0) * std::exp(-0.25 * seed_at * seed_at) *
            pcf_asym_sum(-(nu - 1.0), seed_at, true);
  cplx fp = -0.5 * seed_at * f + nu * fm;
  weber_march(nu, f, fp, seed_at, z);
  return f;
}

cplx pcf_D_asymptotic(cplx nu, cplx z) {
  if (std::abs(z) < 15.0) throw std::domain_error("pcf_D_asymptotic: |z| < 15");
  if (std::fabs(0.25 * (z * z).real()) > 700.0)
    throw std::overflow_error("pcf_D_asymptotic: exponential factor overflows");
  const double th = std::arg(z);
  const double tol = 1e-8;
  const cplx i(0.0, 1.0);
  const cplx dominant = pcf_asym_sum(-nu, z, true);
  if (std::fabs(th) < 0.75 * kPi - tol) {
    return powc(std::log(z), nu) * std::exp(-0.25 * z * z) * dominant;
  }
  const cplx sub = std::sqrt(2.0 * kPi) * reciprocal_gamma(-nu) * std::exp(i * kPi * nu) *
                   std::exp(0.25 * z * z) * pcf_asym_sum(nu + 1.0, z, false);
  if (std::fabs(th - 0.75 * kPi) <= tol) {
    const cplx lz = std::log(z);  // arg z = 3pi/4, principal
    return powc(lz, nu) * std::exp(-0.25 * z * z) * dominant - sub * powc(lz, -nu - 1.0);
  }
  if (std::fabs(th + 0.75 * kPi) <= tol) {
    // the ray is addressed as arg z = 5pi/4, continued from the upper sector
    const cplx lz = cplx(std::log(std::abs(z)), 1.25 * kPi);
    return std::exp(-2.0 * kPi * i * nu) * powc(lz, nu) * std::exp(-0.25 * z * z) * dominant -
           sub * powc(lz, -nu - 1.0);
  }
  throw std::domain_error("pcf_D_asymptotic: sector not covered");
}

}  // namespace painleve
