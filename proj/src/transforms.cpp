#include "painleve/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace painleve {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double rel(double defect, double scale) { return std::fabs(defect) / std::max(scale, 1.0); }

double relc(cplx defect, double scale) { return std::abs(defect) / std::max(scale, 1.0); }
}  // namespace

PhiState phi_state(const SolutionTrajectory& traj, double x) {
  auto st = traj.eval(x);
  PhiState p;
  p.x = x;
  p.phi = st.phi;
  p.dphi = st.dphi;
  p.d2phi = st.d2phi;
  p.d3phi = ode_rhs_derivative(x, st.phi, st.dphi, st.d2phi);
  return p;
}

HValue h_value(const PhiState& st) {
  HValue v;
  v.den = st.dphi - 1.0;
  v.num = st.dphi - std::cos(st.phi);
  v.h = v.num / v.den;
  const double sp = std::sin(st.phi);
  const double dnum = st.d2phi + st.dphi * sp;
  // quotient rule, first and second order
  v.h_x = (dnum * v.den - v.num * st.d2phi) / (v.den * v.den);
  const double d2num = st.d3phi + st.d2phi * sp + st.dphi * st.dphi * std::cos(st.phi);
  v.h_xx = (d2num * v.den - v.num * st.d3phi) / (v.den * v.den) -
           2.0 * (dnum * v.den - v.num * st.d2phi) * st.d2phi / (v.den * v.den * v.den);
  // tau = -x^2/8, d/dtau = (-4/x) d/dx
  v.h_tau = -4.0 / st.x * v.h_x;
  v.h_tautau = 16.0 / (st.x * st.x) * v.h_xx - 16.0 / (st.x * st.x * st.x) * v.h_x;
  return v;
}

TransformPoint chain_point(const SolutionTrajectory& traj, double x) {
  auto st = traj.eval(x);
  if (std::fabs(st.dphi - 1.0) <= 1e-8)
    throw h_singular_error("chain_point: phi' = 1 within 1e-8 at x = " + format17(x) +
                           ", h is singular");
  TransformPoint tp;
  tp.x = x;
  tp.phi = st.phi;
  tp.dphi = st.dphi;
  tp.d2phi = st.d2phi;
  tp.s = 0.5 * x;
  tp.tau = -x * x / 8.0;
  tp.y = std::exp(cplx(0.0, -2.0 * st.phi));
  const double half = 0.5 * st.phi;
  tp.w = cplx(0.0, -1.0) * (std::cos(half) / std::sin(half));
  tp.h = 1.0 + 2.0 * std::sin(half) * std::sin(half) / (st.dphi - 1.0);
  return tp;
}

double pv4_residual(const PhiState& st) {
  const cplx i(0.0, 1.0);
  const cplx y = std::exp(-2.0 * i * st.phi);
  const cplx ys = -4.0 * i * st.dphi * y;
  const cplx yss = -8.0 * i * st.d2phi * y - 16.0 * st.dphi * st.dphi * y;
  const double s = 0.5 * st.x;
  const cplx t1 = (1.0 / (2.0 * y) + 1.0 / (y - 1.0)) * ys * ys;
  const cplx t2 = -ys / s;
  const cplx t3 = -4.0 * i * y / s;
  const cplx t4 = 8.0 * y * (y + 1.0) / (y - 1.0);
  // defect relative to the second-derivative term: the singular-prone terms
  // grow exactly as fast as any perturbation-induced defect, so using them
  // as the scale would mask the sensitivity the controls must detect
  return relc(yss - (t1 + t2 + t3 + t4), std::abs(yss));
}

namespace {

struct PiiiData {
  cplx w, wt, wtt, t;
};

PiiiData piii_data(const PhiState& st) {
  PiiiData d;
  const cplx i(0.0, 1.0);
  const double half = 0.5 * st.phi;
  const double cot = std::cos(half) / std::sin(half);
  const double csc2 = 1.0 / (std::sin(half) * std::sin(half));
  d.w = -i * cot;
  d.wt = -st.dphi * csc2;  // d/dt = 2i d/dx
  d.wtt = 2.0 * i * (-st.d2phi * csc2 + st.dphi * st.dphi * csc2 * cot);
  d.t = -i * st.x / 2.0;
  return d;
}

double piii_defect(const PiiiData& d, double sign_of_w2_term) {
  const cplx t1 = d.wt * d.wt / d.w;
  const cplx t2 = -d.wt / d.t;
  const cplx t3 = sign_of_w2_term * (d.w * d.w - 1.0) / d.t;
  const cplx t4 = d.w * d.w * d.w;
  const cplx t5 = -1.0 / d.w;
  return relc(d.wtt - (t1 + t2 + t3 + t4 + t5), std::abs(d.wtt));
}

}  // namespace

double piii6_residual(const PhiState& st) { return piii_defect(piii_data(st), +1.0); }

double piii5_residual(const PhiState& st) {
  PiiiData d = piii_data(st);
  d.w = -d.w;  // p = -w
  d.wt = -d.wt;
  d.wtt = -d.wtt;
  return piii_defect(d, -1.0);
}

double pv8_residual(const PhiState& st) {
  const HValue hv = h_value(st);
  const double tau = -st.x * st.x / 8.0;
  const double t1 = (1.0 / (2.0 * hv.h) + 1.0 / (hv.h - 1.0)) * hv.h_tau * hv.h_tau;
  const double t2 = -hv.h_tau / tau;
  const double t3 = -0.125 * (hv.h - 1.0) * (hv.h - 1.0) / (tau * tau * hv.h);
  const double t4 = -hv.h / tau;
  return rel(hv.h_tautau - (t1 + t2 + t3 + t4), std::fabs(hv.h_tautau));
}

double pair7_roundtrip_defect(const PhiState& st) {
  const PiiiData d = piii_data(st);
  const cplx tau = d.t * d.t / 2.0;
  const cplx h7 = (d.wt - d.w * d.w - 1.0) / (d.wt - d.w * d.w + 1.0);
  // h'(tau) along the flow: dh/dtau = (dh/dt)/t with dh/dt = 2 D'/(D+1)^2,
  // D = w' - w^2
  const cplx D = d.wt - d.w * d.w;
  const cplx Dt = d.wtt - 2.0 * d.w * d.wt;
  const cplx h7_tau = 2.0 * Dt / ((D + 1.0) * (D + 1.0)) / d.t;
  // inverse relation of the pair (obtained by differentiating the forward
  // map and eliminating the second derivative through the w equation)
  const cplx wrec = 2.0 * d.t * h7 / (2.0 * tau * h7_tau - h7 + 1.0);
  return std::abs(wrec - d.w) / std::max(1.0, std::abs(d.w));
}

namespace {

template <class F>
ResidualReport run_report(ChainEquation eq, const std::vector<double>& grid,
                          F&& point_residual) {
  ResidualReport r;
  r.equation = eq;
  r.grid = grid;
  r.residuals.reserve(grid.size());
  r.excluded.reserve(grid.size());
  for (double x : grid) {
    const double v = point_residual(x);
    r.residuals.push_back(v);
    r.excluded.push_back(std::isnan(v));
    if (!std::isnan(v)) r.norm = std::max(r.norm, v);
  }
  return r;
}

}  // namespace

ResidualReport residual_PV4(const SolutionTrajectory& traj, const std::vector<double>& grid) {
  return run_report(ChainEquation::PV4, grid, [&](double x) {
    const PhiState st = phi_state(traj, x);
    if (std::fabs(std::sin(st.phi)) < 1e-3) return kNaN;  // y too close to 1
    return pv4_residual(st);
  });
}

ResidualReport residual_PIII6(const SolutionTrajectory& traj, const std::vector<double>& grid) {
  return run_report(ChainEquation::PIII6, grid, [&](double x) {
    const PhiState st = phi_state(traj, x);
    const double sh = std::sin(0.5 * st.phi), ch = std::cos(0.5 * st.phi);
    if (std::fabs(ch) < 1e-3) return kNaN;  // w near 0
    if (std::fabs(sh) < 1e-3) return kNaN;  // w pole
    return piii6_residual(st);
  });
}

ResidualReport residual_PV8(const SolutionTrajectory& traj, const std::vector<double>& grid) {
  return run_report(ChainEquation::PV8, grid, [&](double x) {
    const PhiState st = phi_state(traj, x);
    if (std::fabs(st.dphi - 1.0) < 1e-6) return kNaN;
    const HValue hv = h_value(st);
    if (std::fabs(hv.h) < 1e-3 || std::fabs(hv.h - 1.0) < 1e-3) return kNaN;
    return pv8_residual(st);
  });
}

ResidualReport pair_roundtrip(const SolutionTrajectory& traj, const std::vector<double>& grid) {
  return run_report(ChainEquation::Pair7, grid, [&](double x) {
    const PhiState st = phi_state(traj, x);
    // reconstructing |w| ~ |cos(phi/2)| from O(|h|) intermediates loses
    // precision near the zeros of w, so those get a wider exclusion
    const double sh = std::sin(0.5 * st.phi), ch = std::cos(0.5 * st.phi);
    if (std::fabs(ch) < 1e-2 || std::fabs(sh) < 1e-2) return kNaN;
    const PiiiData d = piii_data(st);
    if (std::abs(d.wt - d.w * d.w + 1.0) < 1e-6) return kNaN;
    const cplx h7 = (d.wt - d.w * d.w - 1.0) / (d.wt - d.w * d.w + 1.0);
    const cplx D = d.wt - d.w * d.w;
    const cplx Dt = d.wtt - 2.0 * d.w * d.wt;
    const cplx h7_tau = 2.0 * Dt / ((D + 1.0) * (D + 1.0)) / d.t;
    if (std::abs(d.t * d.t * h7_tau - h7 + 1.0) < 1e-6) return kNaN;
    return pair7_roundtrip_defect(st);
  });
}

void write_residual_csv(const ResidualReport& report, std::ostream& os) {
  os << "x,residual\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    if (report.excluded[i]) continue;
    os << format17(report.grid[i]) << ',' << format17(report.residuals[i]) << '\n';
  }
}

}  // namespace painleve
