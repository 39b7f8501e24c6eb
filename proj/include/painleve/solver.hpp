#pragma once

// Adaptive integration of
//   phi'' = (phi'^2 - 1) cot(phi) + (1 - phi')/x
// from a series seed near x = 0 out to large x.  The right-hand side has
// removable singularities on the lines phi = k pi; the integrator never
// evaluates inside the strip |phi - k pi| < delta_sing.  Instead it locates
// the crossing x*, builds a local Taylor model of psi = phi - k pi there
// (psi(x*) = 0, psi'(x*) = +-1), and restarts on the far side ("vaulting").

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "painleve/common.hpp"
#include "painleve/rk.hpp"

namespace painleve {

/// Local Taylor model of psi = phi - k pi about a crossing.
struct VaultExpansion {
  double x_star = 0.0;
  long long k = 0;   // crossed line phi = k pi
  int eps = 0;       // slope at the crossing, +1 or -1
  std::array<double, 5> taylor{};  // psi coefficients, orders 0..4
  double x_lo = 0.0, x_hi = 0.0;   // interval covered by the local model

  double psi(double h) const {
    return ((((taylor[4] * h) + taylor[3]) * h + taylor[2]) * h + taylor[1]) * h + taylor[0];
  }
  double dpsi(double h) const {
    return ((4.0 * taylor[4] * h + 3.0 * taylor[3]) * h + 2.0 * taylor[2]) * h + taylor[1];
  }
  double d2psi(double h) const {
    return (12.0 * taylor[4] * h + 6.0 * taylor[3]) * h + 2.0 * taylor[2];
  }
};

struct TrajectoryNode {
  double x = 0.0, phi = 0.0, dphi = 0.0;
};

struct SolveOptions {
  double x0 = 1e-2;          // seed abscissa (shrunk if the series radius is smaller)
  int series_order = 12;
  double delta_sing = 1e-3;  // half-width of the excluded strip around phi = k pi
  double dphi_bound = 1e3;   // blow-up guard on |phi'|
  double h_init = 1e-3;
};

struct SolutionTrajectory {
  double a = 0.0;
  double tol = 0.0;
  double seed_x0 = 0.0;
  double x_end = 0.0;
  double delta_sing = 1e-3;

  std::vector<TrajectoryNode> nodes;       // step endpoints plus crossing points
  std::vector<VaultExpansion> crossings;

  struct State {
    double phi = 0.0, dphi = 0.0, d2phi = 0.0;
  };

  /// Interpolated state; phi'' from the equation in the smooth region and
  /// from the vault model inside crossing strips.  Throws std::out_of_range
  /// outside [seed_x0, x_end].
  State eval(double x) const;

  double phi(double x) const { return eval(x).phi; }
  double dphi(double x) const { return eval(x).dphi; }

  /// Defect-based residual scan over the stored interpolants: the maximum
  /// over sample points of h_step * |interp'' - rhs| / (1 + |rhs|).  A
  /// defect times the step length is commensurate with the local error, so
  /// this stays within a moderate multiple of tol for a healthy trajectory.
  double max_scaled_defect() const;

  // internal segment table (kind 0: rk step index, kind 1: crossing index)
  struct Segment {
    double x_lo, x_hi;
    int kind;
    std::size_t idx;
  };
  std::vector<rk::DenseStep<2>> steps;
  std::vector<Segment> segments;
};

/// Integrate from the series seed to x_max.  Requires 1e-14 <= tol <= 1e-6
/// and x_max greater than the seed point.
SolutionTrajectory solve_ivp(double a, double x_max, double tol,
                             const SolveOptions& opts = {});

/// Build the local crossing model from a state near a line phi = k pi.
/// Preconditions: |sin phi| < 3 delta_sing, |phi'| within 1e-2 of +-1.
/// Throws crossing_error when the incoming slope is incompatible.
VaultExpansion vault(double x, double phi, double dphi, double tol,
                     double delta_sing = 1e-3);

/// Trajectory export: header `x,phi,dphi`, one row per node, 17 significant
/// digits.
void write_trajectory_csv(const SolutionTrajectory& traj, std::ostream& os);

/// Right-hand side of the second-order equation in factored form; requires
/// sin(phi) != 0.
double ode_rhs(double x, double phi, double dphi);

/// d/dx of the right-hand side along a solution (used for analytic third
/// derivatives downstream).
double ode_rhs_derivative(double x, double phi, double dphi, double d2phi);

}  // namespace painleve
