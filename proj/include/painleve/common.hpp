#pragma once

// Shared constants, error types and small numeric helpers.

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace painleve {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

/// Adaptive step control could not make progress; carries the last x reached.
class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& msg, double last_x)
      : std::runtime_error(msg), last_x_(last_x) {}
  double last_x() const { return last_x_; }

 private:
  double last_x_;
};

/// |phi'| exceeded the safety bound; the solution is leaving the smooth regime.
class blow_up_error : public integration_error {
 public:
  using integration_error::integration_error;
};

/// A cot singularity crossing with slope incompatible with a smooth passage.
class crossing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature path runs through a zero of the integrand denominator.
class path_singularity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix required for normalization is too ill-conditioned to invert.
class conditioning_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection bracket does not straddle the separatrix.
class bracketing_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Trajectory has not reached a classifiable asymptotic regime.
class regime_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The PV function h degenerates (phi' = 1, the exact-solution family).
class h_singular_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

/// Render a double with 17 significant digits (round-trip safe).
inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Reduce v to the representative in (-p/2, p/2].
inline double reduce_mod(double v, double p) {
  double r = std::remainder(v, p);
  if (r <= -0.5 * p) r += p;
  return r;
}

}  // namespace painleve
