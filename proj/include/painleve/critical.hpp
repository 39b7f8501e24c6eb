#pragma once

// Location of the separatrix parameter a* = 1/pi by bisection on the
// long-range behaviour of the trajectory, plus the limit diagnostics of the
// boundary solution phi -> pi/2.

#include <vector>

#include "painleve/common.hpp"

namespace painleve {

enum class Label { subcritical_B, supercritical_A, undecided };

struct RegimeClassification {
  double a = 0.0;
  Label label = Label::undecided;
  double x_used = 0.0;
  double phi_witness = 0.0;
  double dphi_witness = 0.0;
};

/// Classify one parameter value by integrating to X (X >= 50):
/// increasing family when phi'(X) > 0.5 and phi(X) > pi/2, decreasing family
/// when phi'(X) < -0.5.  An undecided verdict escalates X geometrically
/// (factor 2, capped at x_cap) before being returned.
RegimeClassification classify(double a, double X, double tol, double x_cap = 3200.0);

struct BisectionStep {
  int iter = 0;
  double a_lo = 0.0, a_hi = 0.0;
  Label label = Label::undecided;  // verdict at the midpoint
};

/// Bisect [a_lo, a_hi] down to width bisection_tol and return the midpoint.
/// The bracket must classify as (subcritical, supercritical); otherwise a
/// bracketing_error is thrown.  A midpoint still undecided at the escalation
/// cap is assigned by the sign of its slope witness (such a point lies many
/// orders of magnitude closer to the separatrix than any realistic
/// tolerance).  The trace receives one row per iteration when non-null.
double locate_critical(double a_lo, double a_hi, double X, double bisection_tol,
                       double tol = 1e-11, std::vector<BisectionStep>* trace = nullptr);

struct LimitCheckResult {
  double deviation = 0.0;  // |phi(X) - pi/2|
  double min_slope = 0.0;  // minimum of phi' on [1, X]
};

/// Diagnostics of the boundary solution at a = 1/pi (nearest double):
/// deviation from pi/2 at X and the monotonicity witness on [1, X].
/// Requires X >= 100.
LimitCheckResult limit_check(double X, double tol = 1e-11);

}  // namespace painleve
