#include "painleve/critical.hpp"

#include <cmath>
#include <stdexcept>

#include "painleve/solver.hpp"

namespace painleve {

RegimeClassification classify(double a, double X, double tol, double x_cap) {
  if (!(X >= 50.0)) throw std::invalid_argument("classify: X must be >= 50");
  RegimeClassification rc;
  rc.a = a;
  double x_run = X;
  for (;;) {
    auto traj = solve_ivp(a, x_run, tol);
    const auto& last = traj.nodes.back();
    rc.x_used = x_run;
    rc.phi_witness = last.phi;
    rc.dphi_witness = last.dphi;
    if (last.dphi > 0.5 && last.phi > 0.5 * kPi) {
      rc.label = Label::subcritical_B;
      return rc;
    }
    if (last.dphi < -0.5) {
      rc.label = Label::supercritical_A;
      return rc;
    }
    if (x_run >= x_cap) {
      rc.label = Label::undecided;
      return rc;
    }
    x_run = std::min(2.0 * x_run, x_cap);
  }
}

double locate_critical(double a_lo, double a_hi, double X, double bisection_tol, double tol,
                       std::vector<BisectionStep>* trace) {
  if (!(a_lo < a_hi)) throw bracketing_error("locate_critical: need a_lo < a_hi");
  auto lo_c = classify(a_lo, X, tol);
  auto hi_c = classify(a_hi, X, tol);
  if (lo_c.label != Label::subcritical_B || hi_c.label != Label::supercritical_A)
    throw bracketing_error("locate_critical: bracket does not straddle the separatrix (lo=" +
                           format17(a_lo) + ", hi=" + format17(a_hi) + ")");
  int iter = 0;
  while (a_hi - a_lo > bisection_tol) {
    const double mid = 0.5 * (a_lo + a_hi);
    auto c = classify(mid, X, tol);
    Label effective = c.label;
    if (effective == Label::undecided)
      effective = c.dphi_witness >= 0.0 ? Label::subcritical_B : Label::supercritical_A;
    if (trace) trace->push_back({iter, a_lo, a_hi, c.label});
    if (effective == Label::subcritical_B)
      a_lo = mid;
    else
      a_hi = mid;
    ++iter;
    if (iter > 200) throw bracketing_error("locate_critical: bisection failed to converge");
  }
  if (trace) trace->push_back({iter, a_lo, a_hi, Label::undecided});
  return 0.5 * (a_lo + a_hi);
}

LimitCheckResult limit_check(double X, double tol) {
  if (!(X >= 100.0)) throw std::invalid_argument("limit_check: X must be >= 100");
  auto traj = solve_ivp(1.0 / kPi, X, tol);
  LimitCheckResult r;
  r.deviation = std::fabs(traj.phi(X) - 0.5 * kPi);
  r.min_slope = 1e300;
  for (const auto& n : traj.nodes)
    if (n.x >= 1.0) r.min_slope = std::min(r.min_slope, n.dphi);
  for (double x = 1.0; x < X; x += 0.05) r.min_slope = std::min(r.min_slope, traj.dphi(x));
  return r;
}

}  // namespace painleve
