#pragma once

// Numerical isomonodromy check.  The PV function h(tau) built from a computed
// trajectory feeds a 2x2 linear system in the spectral variable,
//   dPsi/dlambda = [ -i tau sigma3 + A/lambda + B/lambda^2 ] Psi,
//   A = [[1/4, u], [v, -1/4]],  B = [[z, q], [q, -z]],
// whose canonical solutions at lambda = infinity and lambda = 0 define a
// connection matrix Q independent of x.  Q is extracted by integrating the
// system from a large-lambda normalization down to a small-lambda one and
// comparing against the closed-form local solution there.

#include <array>
#include <vector>

#include "painleve/common.hpp"
#include "painleve/solver.hpp"

namespace painleve {

using Mat2 = std::array<cplx, 4>;  // row-major 2x2

struct LaxCoefficients {
  double tau = 0.0;
  double h = 0.0, h_tau = 0.0;
  cplx z, q, u, v, g;
};

/// Coefficients at one trajectory point; requires |phi' - 1|, |h|, |h - 1|
/// bounded away from zero by 1e-6.
LaxCoefficients lax_coeffs(const SolutionTrajectory& traj, double x);

/// J(tau) = 1/8 int_{-c}^{tau} dt / (t h(t)) along the negative real axis,
/// evaluated as (1/4) int_{sqrt(8c)}^{x} dx' / (x' h(x')).  The path is
/// scanned for sign changes of h; finding one raises path_singularity_error
/// (h poles are harmless, the integrand vanishes quadratically there).
double compute_J(const SolutionTrajectory& traj, double c, double tau, double quad_tol = 1e-12);

struct LambdaRun {
  Mat2 psi;                  // propagated fundamental matrix at lambda_min
  double wronskian_drift = 0.0;  // |det - det_initial| / |det_initial|
  std::size_t steps = 0;
};

/// Propagate the canonical large-lambda solution (with its first 1/lambda
/// correction) from lambda_max down to lambda_min with phase-resolving steps.
/// d_norm is the diagonal normalization tau^{1/8} e^{J}.
LambdaRun integrate_lambda(const LaxCoefficients& co, cplx d_norm, double lambda_max,
                           double lambda_min, double rk_tol = 1e-12);

struct MonodromyRecord {
  double a = 0.0, x = 0.0;
  double c_norm = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;
  Mat2 Q{};
  double truncation_estimate = 0.0;
  double wronskian_drift = 0.0;
  double q21_ratio = 0.0;  // |Q21| / (2^{-3/4} sqrt(a pi)), diagnostic only
};

/// Extract Q at one x.  lambda_max must satisfy |tau| lambda_max >= 50 and
/// lambda_min <= 1e-2; conditioning failures of the small-lambda
/// normalization raise conditioning_error.
MonodromyRecord extract_Q(const SolutionTrajectory& traj, double x, double c,
                          double lambda_max, double lambda_min, double rk_tol = 1e-12);

/// Convenience: pick lambda_max = 200/|tau|, lambda_min = 2e-3.
MonodromyRecord extract_Q(const SolutionTrajectory& traj, double x, double c = 1.0);

}  // namespace painleve
