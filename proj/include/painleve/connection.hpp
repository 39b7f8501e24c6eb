#pragma once

// Closed-form side of the connection problem: regime classification, the
// asymptotic parameters beta(a) and gamma(a), the origin value of the
// connection-matrix entry (Q)_21, and its two large-x closed forms.  The
// modulus identities tying these together are the computational content of
// the connection problem's solution.

#include "painleve/common.hpp"

namespace painleve {

enum class Regime { A, B, C };  // A: a > 1/pi, B: a < 1/pi, C: a = 1/pi

struct ConnectionPrediction {
  double a = 0.0;
  Regime regime = Regime::B;
  double beta = 0.0;         // undefined in regime C
  double gamma = 0.0;        // regime A: representative of a mod-pi class
  bool gamma_mod_pi = false; // true exactly in regime A
  double limit_value = 0.0;  // regime C: pi/2
};

/// Classify a and fill the asymptotic parameters.  Total for finite a.
ConnectionPrediction predict(double a, double classification_tol = 1e-12);

/// gamma in the decreasing regime: pi/2 + 2 arg Gamma(1/2 - i beta/2)
/// + beta ln 2, reduced to the representative in (-pi/2, pi/2]; callers
/// compare mod pi.
double gamma_A(double beta);

/// gamma in the increasing regime: -2 arg Gamma(i beta/2) + beta ln 2
/// - pi sign(beta), with the continuity value 0 at beta = 0.
double gamma_B(double beta);

enum class Q21Source { origin, decreasing, increasing };

struct Q21Value {
  cplx value;
  Q21Source source = Q21Source::origin;
};

/// Origin monodromy datum i 2^{-3/4} sqrt(a pi); requires a >= 0.
Q21Value q21_origin(double a);

/// Large-x closed form in the decreasing regime,
///   2^{-1/4} sqrt(pi) e^{-pi beta/4} / Gamma(1/2 - i beta/2)
///   * exp(i S + i x/2 - i beta/2 ln x - i beta/2 ln 2 + 3 pi i/4).
Q21Value q21_decreasing(double beta, double S, double x);

/// Large-x closed form in the increasing regime,
///   i sqrt(beta) 2^{-3/4} sqrt(pi) e^{pi beta/4} / Gamma(i beta/2 + 1)
///   * exp(-i S + i x/2 + i beta/2 ln x + i beta/2 ln 2).
/// sqrt(beta) is the principal complex root when beta < 0.
Q21Value q21_increasing(double beta, double S, double x);

/// Inverse of the beta formulas: regime A gives (1 + e^{-pi beta})/pi,
/// regime B gives (1 - e^{pi beta})/pi.
double invert_beta(double beta, Regime regime);

}  // namespace painleve
