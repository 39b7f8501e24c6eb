#pragma once

// The transformation chain linking the phi equation to its Painleve V and
// Painleve III forms:
//   y(s)   = exp(-2 i phi(x)),            s = x/2            (PV in y)
//   p(t)   = (sqrt(y)+1)/(sqrt(y)-1),     s = i t            (PIII in p)
//   w(t)   = -p(t)                                            (PIII in w)
//   h(tau) = 1 + 2 sin^2(phi/2)/(phi'-1), tau = -x^2/8       (PV in h)
// Each transform is verified by evaluating the target equation's defect with
// analytic derivatives (no numerical differentiation anywhere).

#include <ostream>
#include <vector>

#include "painleve/common.hpp"
#include "painleve/solver.hpp"

namespace painleve {

/// Pointwise solution data with analytic derivatives through third order.
struct PhiState {
  double x = 0.0;
  double phi = 0.0, dphi = 0.0, d2phi = 0.0, d3phi = 0.0;
};

/// Read (phi, phi', phi'') from the trajectory and phi''' from
/// differentiating the equation.
PhiState phi_state(const SolutionTrajectory& traj, double x);

struct TransformPoint {
  double x = 0.0;
  double phi = 0.0, dphi = 0.0, d2phi = 0.0;
  cplx y;        // unit-modulus PV variable
  cplx w;        // PIII variable, -i cot(phi/2)
  double h = 0.0;
  double tau = 0.0;  // -x^2/8
  double s = 0.0;    // x/2
};

/// Map one trajectory point through the whole chain.  Throws
/// h_singular_error when phi' is within 1e-8 of 1.
TransformPoint chain_point(const SolutionTrajectory& traj, double x);

enum class ChainEquation { PV4, PIII6, PV8, Pair7 };

struct ResidualReport {
  ChainEquation equation = ChainEquation::PV4;
  std::vector<double> grid;
  std::vector<double> residuals;  // NaN at excluded points
  std::vector<bool> excluded;
  double norm = 0.0;  // max over non-excluded points

  std::size_t excluded_count() const {
    std::size_t n = 0;
    for (bool b : excluded) n += b;
    return n;
  }
};

// Value-level defects, all relative to the largest term of the target
// equation; negative-control tests feed perturbed states through these.
double pv4_residual(const PhiState& st);
double piii5_residual(const PhiState& st);  // equation satisfied by p
double piii6_residual(const PhiState& st);  // equation satisfied by w = -p
double pv8_residual(const PhiState& st);
double pair7_roundtrip_defect(const PhiState& st);

ResidualReport residual_PV4(const SolutionTrajectory& traj, const std::vector<double>& grid);
ResidualReport residual_PIII6(const SolutionTrajectory& traj, const std::vector<double>& grid);
ResidualReport residual_PV8(const SolutionTrajectory& traj, const std::vector<double>& grid);
ResidualReport pair_roundtrip(const SolutionTrajectory& traj, const std::vector<double>& grid);

/// `x,residual` rows at 17 significant digits; excluded points are skipped.
void write_residual_csv(const ResidualReport& report, std::ostream& os);

/// h together with its x- and tau-derivatives; numerator and denominator are
/// exposed separately so near-crossing callers can avoid cancellation.
struct HValue {
  double h = 0.0, h_x = 0.0, h_tau = 0.0, h_xx = 0.0, h_tautau = 0.0;
  double num = 0.0, den = 0.0;  // h = num/den, den = phi' - 1
};
HValue h_value(const PhiState& st);

}  // namespace painleve
