#pragma once

// Self-contained complex special functions: principal-branch log-gamma and
// parabolic cylinder functions D_nu(z) with their large-|z| asymptotics.

#include "painleve/common.hpp"

namespace painleve {

/// Principal branch of ln Gamma(z), continuous on the plane cut along the
/// negative real axis.  Relative accuracy ~1e-14 for |z| <= 100.
/// Throws std::domain_error at the poles z = 0, -1, -2, ...
cplx log_gamma(cplx z);

/// Imaginary part of log_gamma (principal-branch convention; the value on the
/// cut is the limit from the upper half-plane).
double arg_gamma(cplx z);

/// 1/Gamma(z), entire; returns 0 at the poles of Gamma.
cplx reciprocal_gamma(cplx z);

/// sin(pi z) with argument reduction accurate near integers.
cplx sin_pi(cplx z);

/// Parabolic cylinder function D_nu(z) for |z| <= 50 and any finite nu.
/// Power-series solutions of the Weber equation with gamma-factor connection
/// coefficients; extended outward by asymptotic seeding plus Taylor marching.
/// Throws std::overflow_error when e^{|Re z^2|/4} overflows.
cplx pcf_D(cplx nu, cplx z);

/// Leading large-|z| asymptotics of D_nu on the principal sector and the two
/// Stokes rays arg z = 3pi/4 and arg z = 5pi/4 (each exponential carries its
/// full inverse-power sum, truncated at the smallest term).  Requires
/// |z| >= 15; other sectors raise std::domain_error.
cplx pcf_D_asymptotic(cplx nu, cplx z);

}  // namespace painleve
