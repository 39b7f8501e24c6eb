#include "painleve/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "painleve/rk.hpp"
#include "painleve/transforms.hpp"

namespace painleve {

namespace {

// ---- 2x2 complex matrix helpers (row-major) ----
Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

cplx det(const Mat2& m) { return m[0] * m[3] - m[1] * m[2]; }

Mat2 inverse(const Mat2& m) {
  const cplx d = det(m);
  return {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
}

Mat2 diag(cplx a, cplx b) { return {a, 0.0, 0.0, b}; }

double max_abs(const Mat2& m) {
  return std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2]), std::abs(m[3])});
}

// 1/h with cancellation-free evaluation inside crossing strips, where both
// numerator and denominator of h vanish quadratically.
double one_over_h(const SolutionTrajectory& traj, double x) {
  auto it = std::upper_bound(
      traj.segments.begin(), traj.segments.end(), x,
      [](double v, const SolutionTrajectory::Segment& s) { return v < s.x_lo; });
  if (it != traj.segments.begin()) --it;
  if (it->kind == 1) {
    const auto& v = traj.crossings[it->idx];
    const double hh = x - v.x_star;
    // den = psi' - 1 as an explicit polynomial (no 1-cancellation), num adds
    // the 1 - cos(phi) part through sin^2
    double den;
    if (v.eps == 1) {
      den = hh * (2.0 * v.taylor[2] + hh * (3.0 * v.taylor[3] + hh * 4.0 * v.taylor[4]));
    } else {
      den = v.dpsi(hh) - 1.0;
    }
    const double psi = v.psi(hh);
    const double phi = double(v.k) * kPi + psi;
    const double s2 = std::sin(0.5 * phi);
    const double num = den + 2.0 * s2 * s2;  // phi' - cos(phi) without cancellation
    return den / num;
  }
  const auto st = traj.eval(x);
  return (st.dphi - 1.0) / (st.dphi - std::cos(st.phi));
}

// adaptive Simpson on [a, b]
template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

}  // namespace

LaxCoefficients lax_coeffs(const SolutionTrajectory& traj, double x) {
  const PhiState st = phi_state(traj, x);
  if (std::fabs(st.dphi - 1.0) < 1e-6)
    throw std::domain_error("lax_coeffs: phi' too close to 1 at x = " + format17(x));
  const HValue hv = h_value(st);
  if (std::fabs(hv.h) < 1e-6 || std::fabs(hv.h - 1.0) < 1e-6)
    throw std::domain_error("lax_coeffs: h degenerate at x = " + format17(x));

  LaxCoefficients co;
  co.tau = -x * x / 8.0;
  co.h = hv.h;
  co.h_tau = hv.h_tau;
  const cplx i(0.0, 1.0);
  const cplx sqrth = std::sqrt(cplx(hv.h));
  co.z = -i / 8.0 * (hv.h + 1.0) / (hv.h - 1.0);
  co.q = -0.25 * sqrth / (hv.h - 1.0);
  const cplx upv = -i / (2.0 * sqrth);
  const cplx umv = i * co.tau * hv.h_tau / ((1.0 - hv.h) * sqrth);
  co.u = 0.5 * (upv + umv);
  co.v = 0.5 * (upv - umv);
  co.g = (1.0 + 1.0 / hv.h) / (8.0 * co.tau);

  // identities tying the coefficients together; violations mean a branch slip
  const cplx id1 = co.z * co.z + co.q * co.q + 1.0 / 64.0;
  const cplx id2 = co.q * (co.u + co.v) - i / (8.0 * (hv.h - 1.0));
  if (std::abs(id1) > 1e-12 || std::abs(id2) > 1e-12 * std::max(1.0, std::abs(co.q)))
    throw std::logic_error("lax_coeffs: internal identity violated");
  return co;
}

double compute_J(const SolutionTrajectory& traj, double c, double tau, double quad_tol) {
  if (!(c > 0.0)) throw std::invalid_argument("compute_J: c must be positive");
  const double x_from = std::sqrt(8.0 * c);
  const double x_to = std::sqrt(-8.0 * tau);
  if (x_from == x_to) return 0.0;
  const double lo = std::min(x_from, x_to), hi = std::max(x_from, x_to);
  if (lo < traj.seed_x0 || hi > traj.x_end)
    throw std::invalid_argument("compute_J: path leaves the trajectory range");

  // scan the path for sign changes of h (zeros make the integral divergent)
  double prev_num = 0.0, prev_x = lo;
  for (double xs = lo; xs <= hi + 1e-12; xs += 0.005) {
    const double xc = std::min(xs, hi);
    const auto st = traj.eval(xc);
    const double num = st.dphi - std::cos(st.phi);
    if (prev_num != 0.0 && num * prev_num < 0.0)
      throw path_singularity_error("compute_J: h changes sign in (" + format17(prev_x) + ", " +
                                   format17(xc) + ")");
    prev_num = num;
    prev_x = xc;
  }

  auto f = [&](double xx) { return one_over_h(traj, xx) / xx; };
  const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  double val = adaptive_simpson(f, lo, hi, fa, fm, fb, quad_tol, 42);
  if (x_to < x_from) val = -val;
  return 0.25 * val;
}

namespace {

struct LambdaRhs {
  cplx mtau;  // -i tau
  Mat2 A, B;
  // integrate in s = -lambda so the independent variable increases
  void operator()(double s, const std::array<double, 8>& y, std::array<double, 8>& f) const {
    const double lam = -s;
    const cplx m11 = mtau + (A[0] / lam) + (B[0] / (lam * lam));
    const cplx m12 = (A[1] / lam) + (B[1] / (lam * lam));
    const cplx m21 = (A[2] / lam) + (B[2] / (lam * lam));
    const cplx m22 = -mtau + (A[3] / lam) + (B[3] / (lam * lam));
    const cplx c1(y[0], y[1]), c2(y[2], y[3]), c3(y[4], y[5]), c4(y[6], y[7]);
    // dPsi/ds = -M Psi
    const cplx d1 = -(m11 * c1 + m12 * c2);
    const cplx d2 = -(m21 * c1 + m22 * c2);
    const cplx d3 = -(m11 * c3 + m12 * c4);
    const cplx d4 = -(m21 * c3 + m22 * c4);
    f = {d1.real(), d1.imag(), d2.real(), d2.imag(),
         d3.real(), d3.imag(), d4.real(), d4.imag()};
  }
};

Mat2 unpack(const std::array<double, 8>& y) {
  return {cplx(y[0], y[1]), cplx(y[4], y[5]), cplx(y[2], y[3]), cplx(y[6], y[7])};
}

std::array<double, 8> pack(const Mat2& m) {
  return {m[0].real(), m[0].imag(), m[2].real(), m[2].imag(),
          m[1].real(), m[1].imag(), m[3].real(), m[3].imag()};
}

}  // namespace

LambdaRun integrate_lambda(const LaxCoefficients& co, cplx d_norm, double lambda_max,
                           double lambda_min, double rk_tol) {
  if (!(std::fabs(co.tau) * lambda_max >= 50.0))
    throw std::invalid_argument("integrate_lambda: need |tau| lambda_max >= 50");
  if (!(lambda_min > 0.0 && lambda_min <= 1e-2))
    throw std::invalid_argument("integrate_lambda: need 0 < lambda_min <= 1e-2");

  const cplx i(0.0, 1.0);
  LambdaRhs rhs;
  rhs.mtau = -i * co.tau;
  rhs.A = {0.25, co.u, co.v, -0.25};
  rhs.B = {co.z, co.q, co.q, -co.z};

  // canonical data at lambda_max: (I + G1/lambda) lambda^{sigma3/4}
  // e^{-i tau lambda sigma3} d^{sigma3}
  const cplx g_off = 1.0 / (2.0 * i * co.tau);
  const Mat2 G1 = {-co.z + co.u * co.v * g_off, co.u * g_off,
                   -co.v * g_off, co.z - co.u * co.v * g_off};
  const double lam0 = lambda_max;
  Mat2 psi = {1.0 + G1[0] / lam0, G1[1] / lam0, G1[2] / lam0, 1.0 + G1[3] / lam0};
  psi = mul(psi, diag(std::pow(lam0, 0.25), std::pow(lam0, -0.25)));
  psi = mul(psi, diag(std::exp(-i * co.tau * lam0), std::exp(i * co.tau * lam0)));
  psi = mul(psi, diag(d_norm, 1.0 / d_norm));

  const cplx det0 = det(psi);
  auto y = pack(psi);
  std::array<double, 8> k1;
  rhs(-lam0, y, k1);

  rk::Controller ctrl;
  const double anorm = max_abs(rhs.A), bnorm = max_abs(rhs.B);
  double s = -lam0;
  const double s_end = -lambda_min;
  double h = 1e-4;
  LambdaRun out;
  int rejects = 0;
  while (s < s_end) {
    const double lam = -s;
    const double cap = 0.1 / (std::fabs(co.tau) + anorm / lam + bnorm / (lam * lam));
    h = std::min({h, cap, s_end - s});
    auto trial = rk::try_step(rhs, s, y, k1, h, rk_tol, rk_tol);
    bool accept = false;
    const double h_next = ctrl.next_h(h, trial.err, &accept);
    if (!accept) {
      if (++rejects > 200)
        throw integration_error("integrate_lambda: repeated rejection at lambda = " +
                                    format17(lam),
                                lam);
      h = h_next;
      continue;
    }
    rejects = 0;
    s += h;
    y = trial.y1;
    k1 = trial.k_end;
    h = h_next;
    ++out.steps;
    if (!std::isfinite(y[0]) || std::fabs(y[0]) > 1e12)
      throw integration_error("integrate_lambda: overflow at lambda = " + format17(-s), -s);
  }
  out.psi = unpack(y);
  out.wronskian_drift = std::abs(det(out.psi) - det0) / std::abs(det0);
  return out;
}

MonodromyRecord extract_Q(const SolutionTrajectory& traj, double x, double c,
                          double lambda_max, double lambda_min, double rk_tol) {
  const LaxCoefficients co = lax_coeffs(traj, x);
  const double J = compute_J(traj, c, co.tau);
  const cplx tau_eighth = std::pow(cplx(co.tau), 0.125);
  const cplx d = tau_eighth * std::exp(J);
  const cplx dt = tau_eighth * std::exp(-J);

  LambdaRun run = integrate_lambda(co, d, lambda_max, lambda_min, rk_tol);

  // small-lambda canonical solution H (I + K1 lambda) lambda^{sigma3/4}
  // e^{i sigma3/(8 lambda)} dt^{sigma3}
  const cplx i(0.0, 1.0);
  const cplx sqrth = std::sqrt(cplx(co.h));
  const cplx sqrthm1 = std::sqrt(cplx(co.h - 1.0));
  const Mat2 H = {i * sqrth / sqrthm1, 1.0 / sqrthm1, 1.0 / sqrthm1, -i * sqrth / sqrthm1};

  // first-order correction from the matched expansion
  const Mat2 A = {0.25, co.u, co.v, -0.25};
  const Mat2 mH = {-H[0], -H[1], -H[2], -H[3]};  // H^{-1} = -H
  const Mat2 S1 = mul(mul(mH, A), H);
  const Mat2 sigma3H = {H[0], H[1], -H[2], -H[3]};  // sigma3 * H
  const Mat2 HsH = mul(H, sigma3H);
  const Mat2 S0 = {i * co.tau * HsH[0], i * co.tau * HsH[1], i * co.tau * HsH[2],
                   i * co.tau * HsH[3]};
  if (std::abs(S1[0] - 0.25) > 1e-8 || std::abs(S1[3] + 0.25) > 1e-8)
    throw std::logic_error("extract_Q: canonical exponent mismatch");
  const cplx k12 = -4.0 * i * S1[1];
  const cplx k21 = 4.0 * i * S1[2];
  const cplx k11 = S1[1] * k21 + S0[0];
  const cplx k22 = S1[2] * k12 + S0[3];
  const Mat2 K1 = {k11, k12, k21, k22};

  Mat2 psi0 = {1.0 + K1[0] * lambda_min, K1[1] * lambda_min,
               K1[2] * lambda_min, 1.0 + K1[3] * lambda_min};
  psi0 = mul(H, psi0);
  psi0 = mul(psi0, diag(std::pow(lambda_min, 0.25), std::pow(lambda_min, -0.25)));
  psi0 = mul(psi0, diag(std::exp(i / (8.0 * lambda_min)), std::exp(-i / (8.0 * lambda_min))));
  psi0 = mul(psi0, diag(dt, 1.0 / dt));

  const double dmag = std::abs(det(psi0));
  if (!(dmag > 1e-8 * max_abs(psi0) * max_abs(psi0)))
    throw conditioning_error("extract_Q: small-lambda normalization is ill-conditioned");

  MonodromyRecord rec;
  rec.a = traj.a;
  rec.x = x;
  rec.c_norm = c;
  rec.lambda_min = lambda_min;
  rec.lambda_max = lambda_max;
  rec.Q = mul(inverse(psi0), run.psi);
  rec.wronskian_drift = run.wronskian_drift;
  rec.truncation_estimate =
      2.0 / (co.tau * co.tau * lambda_max * lambda_max) + 10.0 * lambda_min * lambda_min;
  const double ref = std::pow(2.0, -0.75) * std::sqrt(std::max(traj.a, 0.0) * kPi);
  rec.q21_ratio = ref > 0.0 ? std::abs(rec.Q[2]) / ref : 0.0;
  return rec;
}

MonodromyRecord extract_Q(const SolutionTrajectory& traj, double x, double c) {
  const double tau = x * x / 8.0;
  return extract_Q(traj, x, c, 200.0 / tau, 2e-3, 1e-12);
}

}  // namespace painleve
