#pragma once

// Extraction of the large-x parameters (sigma, beta, gamma) from a computed
// trajectory by least squares of phi - sigma x against [ln x, 1] on doubling
// windows, with the window-to-window drift as the error estimate.

#include <ostream>
#include <vector>

#include "painleve/common.hpp"
#include "painleve/connection.hpp"
#include "painleve/solver.hpp"

namespace painleve {

struct FitWindow {
  double x_lo = 0.0, x_hi = 0.0;
  double beta = 0.0, gamma = 0.0;
};

struct AsymptoticFit {
  int sigma = 1;  // +1 increasing family, -1 decreasing
  double beta_fit = 0.0, gamma_fit = 0.0;
  std::vector<FitWindow> windows;
  double drift = 0.0;       // max parameter change across the last two windows
  bool refined = false;     // 1/x regressor included
  double condition = 0.0;   // worst normal-equation condition number seen
};

/// Fit on n_windows doubling windows starting at x_lo, 200 samples per
/// window equally spaced in ln x.  The trajectory must extend to
/// x_lo * 2^n_windows and n_windows must be >= 2.  Throws regime_error when
/// the mean slope on the last window is not within 0.1 of +-1.
AsymptoticFit fit(const SolutionTrajectory& traj, double x_lo, int n_windows,
                  bool refined = false);

/// Defect of the first-order slope expansion at X:
///   |phi'(X) - sigma - correction(X)/X|,
/// correction = sin(4S) + 2 beta sin^2(2S) on the decreasing family and
/// 2 beta sin^2(2S) on the increasing one, with S = phi(X)/2.  O(X^-2) on a
/// true solution.  Throws regime_error for the separatrix regime.
double refined_slope_check(const SolutionTrajectory& traj, double X,
                           const ConnectionPrediction& pred);

/// Mismatch of regimes raises classification_error; gamma is compared mod pi
/// when the prediction carries that ambiguity.
class classification_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CompareResult {
  double beta_diff = 0.0;
  double gamma_diff = 0.0;
  bool gamma_mod_pi = false;
  bool beta_ok = false, gamma_ok = false;
};

CompareResult compare(const AsymptoticFit& f, const ConnectionPrediction& p, double beta_tol,
                      double gamma_tol);

/// JSON record mirroring the fit fields.
void write_fit_json(const AsymptoticFit& f, std::ostream& os);

}  // namespace painleve
