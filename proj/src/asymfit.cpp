#include "painleve/asymfit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace painleve {

namespace {

constexpr int kSamplesPerWindow = 200;

struct WindowFit {
  double beta = 0.0, gamma = 0.0, cond = 0.0;
};

// Least squares of v = phi - sigma x against [lnx - m, 1] (optionally 1/x),
// samples equally spaced in ln x.  Centering the log regressor keeps the
// normal equations well conditioned at any window position.
WindowFit fit_window(const SolutionTrajectory& traj, double lo, double hi, int sigma,
                     bool refined) {
  const int n = kSamplesPerWindow;
  std::vector<double> lx(n), val(n), ix(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  double mean_l = 0.0;
  for (int i = 0; i < n; ++i) {
    lx[i] = llo + (lhi - llo) * i / (n - 1);
    const double x = std::exp(lx[i]);
    val[i] = traj.phi(x) - sigma * x;
    ix[i] = 1.0 / x;
    mean_l += lx[i];
  }
  mean_l /= n;

  const int dim = refined ? 3 : 2;
  double G[3][3] = {{0}}, b[3] = {0};
  for (int i = 0; i < n; ++i) {
    const double reg[3] = {lx[i] - mean_l, 1.0, ix[i]};
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) G[r][c] += reg[r] * reg[c];
      b[r] += reg[r] * val[i];
    }
  }

  // condition estimate of the symmetric normal matrix via the eigenvalue
  // extremes of its 2x2 (or a power-iteration bound for the 3x3 case)
  WindowFit out;
  if (dim == 2) {
    const double tr = G[0][0] + G[1][1];
    const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double lmax = 0.5 * tr + disc, lmin = 0.5 * tr - disc;
    out.cond = lmax / std::max(lmin, 1e-300);
  } else {
    double lmax = 0.0, lmin = 1e300;
    for (int r = 0; r < 3; ++r) {
      double row = 0.0;
      for (int c = 0; c < 3; ++c) row += std::fabs(G[r][c]);
      lmax = std::max(lmax, row);
      lmin = std::min(lmin, G[r][r]);
    }
    out.cond = lmax / std::max(lmin, 1e-300);
  }

  // solve by Gaussian elimination with partial pivoting
  double A[3][4];
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) A[r][c] = G[r][c];
    A[r][dim] = b[r];
  }
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r = c + 1; r < dim; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    for (int k = 0; k <= dim; ++k) std::swap(A[c][k], A[piv][k]);
    for (int r = c + 1; r < dim; ++r) {
      const double f = A[r][c] / A[c][c];
      for (int k = c; k <= dim; ++k) A[r][k] -= f * A[c][k];
    }
  }
  double sol[3] = {0};
  for (int r = dim - 1; r >= 0; --r) {
    double s = A[r][dim];
    for (int c = r + 1; c < dim; ++c) s -= A[r][c] * sol[c];
    sol[r] = s / A[r][r];
  }
  out.beta = sol[0];
  out.gamma = sol[1] - sol[0] * mean_l;  // undo the centering
  return out;
}

}  // namespace

AsymptoticFit fit(const SolutionTrajectory& traj, double x_lo, int n_windows, bool refined) {
  if (n_windows < 2) throw std::invalid_argument("fit: need at least two windows");
  const double reach = x_lo * std::pow(2.0, n_windows);
  if (traj.x_end < reach * (1.0 - 1e-12))
    throw std::invalid_argument("fit: trajectory ends at " + format17(traj.x_end) +
                                ", needs " + format17(reach));

  // sign of the mean slope on the last window
  const double last_lo = x_lo * std::pow(2.0, n_windows - 1);
  double mean_slope = 0.0;
  for (int i = 0; i < kSamplesPerWindow; ++i) {
    const double x = last_lo * std::pow(2.0, i / double(kSamplesPerWindow - 1));
    mean_slope += traj.dphi(x);
  }
  mean_slope /= kSamplesPerWindow;
  if (std::fabs(std::fabs(mean_slope) - 1.0) > 0.1)
    throw regime_error("fit: mean slope " + format17(mean_slope) +
                       " is not in an asymptotic regime");

  AsymptoticFit out;
  out.sigma = mean_slope > 0.0 ? 1 : -1;
  out.refined = refined;
  for (int j = 0; j < n_windows; ++j) {
    const double lo = x_lo * std::pow(2.0, j), hi = 2.0 * lo;
    WindowFit wf = fit_window(traj, lo, hi, out.sigma, refined);
    out.windows.push_back({lo, hi, wf.beta, wf.gamma});
    out.condition = std::max(out.condition, wf.cond);
  }
  const auto& wl = out.windows.back();
  const auto& wp = out.windows[out.windows.size() - 2];
  out.beta_fit = wl.beta;
  out.gamma_fit = wl.gamma;
  out.drift = std::max(std::fabs(wl.beta - wp.beta), std::fabs(wl.gamma - wp.gamma));
  return out;
}

double refined_slope_check(const SolutionTrajectory& traj, double X,
                           const ConnectionPrediction& pred) {
  if (pred.regime == Regime::C)
    throw regime_error("refined_slope_check: separatrix regime has no slope expansion");
  const auto st = traj.eval(X);
  const double S = 0.5 * st.phi;
  double correction, sigma;
  if (pred.regime == Regime::A) {
    sigma = -1.0;
    correction = std::sin(4.0 * S) + 2.0 * pred.beta * std::sin(2.0 * S) * std::sin(2.0 * S);
  } else {
    sigma = 1.0;
    correction = 2.0 * pred.beta * std::sin(2.0 * S) * std::sin(2.0 * S);
  }
  return std::fabs(st.dphi - sigma - correction / X);
}

CompareResult compare(const AsymptoticFit& f, const ConnectionPrediction& p, double beta_tol,
                      double gamma_tol) {
  const Regime fit_regime = f.sigma > 0 ? Regime::B : Regime::A;
  if (p.regime == Regime::C || fit_regime != p.regime)
    throw classification_error("compare: fitted family does not match the predicted regime");
  CompareResult r;
  r.beta_diff = std::fabs(f.beta_fit - p.beta);
  r.gamma_mod_pi = p.gamma_mod_pi;
  if (p.gamma_mod_pi)
    r.gamma_diff = std::fabs(reduce_mod(f.gamma_fit - p.gamma, kPi));
  else
    r.gamma_diff = std::fabs(f.gamma_fit - p.gamma);
  r.beta_ok = r.beta_diff <= beta_tol;
  r.gamma_ok = r.gamma_diff <= gamma_tol;
  return r;
}

void write_fit_json(const AsymptoticFit& f, std::ostream& os) {
  os << "{\"sigma\":" << f.sigma << ",\"beta\":" << format17(f.beta_fit)
     << ",\"gamma\":" << format17(f.gamma_fit) << ",\"drift\":" << format17(f.drift)
     << ",\"refined\":" << (f.refined ? "true" : "false") << ",\"windows\":[";
  for (std::size_t i = 0; i < f.windows.size(); ++i) {
    const auto& w = f.windows[i];
    os << (i ? "," : "") << "{\"x_lo\":" << format17(w.x_lo) << ",\"x_hi\":" << format17(w.x_hi)
       << ",\"beta\":" << format17(w.beta) << ",\"gamma\":" << format17(w.gamma) << "}";
  }
  os << "]}\n";
}

}  // namespace painleve
