#include "painleve/connection.hpp"

#include <cmath>
#include <stdexcept>

#include "painleve/specfun.hpp"

namespace painleve {

namespace {
constexpr double kLn2 = 0.69314718055994530941723212145818;
}

ConnectionPrediction predict(double a, double classification_tol) {
  ConnectionPrediction p;
  p.a = a;
  const double d = a - 1.0 / kPi;
  if (std::fabs(d) <= classification_tol) {
    p.regime = Regime::C;
    p.limit_value = 0.5 * kPi;
    return p;
  }
  if (d > 0.0) {
    p.regime = Regime::A;
    p.beta = -std::log(a * kPi - 1.0) / kPi;
    p.gamma = gamma_A(p.beta);
    p.gamma_mod_pi = true;
  } else {
    p.regime = Regime::B;
    p.beta = std::log(1.0 - a * kPi) / kPi;
    p.gamma = gamma_B(p.beta);
  }
  return p;
}

double gamma_A(double beta) {
  // Phase balance of the connection-matrix entry: equating the origin datum
  // i 2^{-3/4} sqrt(a pi) with the large-x closed form fixes
  //   gamma = pi/2 + 2 arg Gamma(1/2 - i beta/2) + beta ln 2   (mod pi),
  // the argument being that of the gamma factor in the closed form itself.
  const double raw = 0.5 * kPi + 2.0 * arg_gamma(cplx(0.5, -0.5 * beta)) + beta * kLn2;
  return reduce_mod(raw, kPi);
}

double gamma_B(double beta) {
  if (beta == 0.0) return 0.0;
  const double sgn = beta > 0.0 ? 1.0 : -1.0;
  return -2.0 * arg_gamma(cplx(0.0, 0.5 * beta)) + beta * kLn2 - kPi * sgn;
}

Q21Value q21_origin(double a) {
  if (a < 0.0) throw std::domain_error("q21_origin: requires a >= 0");
  return {cplx(0.0, std::pow(2.0, -0.75) * std::sqrt(a * kPi)), Q21Source::origin};
}

Q21Value q21_decreasing(double beta, double S, double x) {
  const cplx amp = std::pow(2.0, -0.25) * std::sqrt(kPi) * std::exp(-0.25 * kPi * beta) *
                   reciprocal_gamma(cplx(0.5, -0.5 * beta));
  const double phase = S + 0.5 * x - 0.5 * beta * std::log(x) - 0.5 * beta * kLn2 +
                       0.75 * kPi;
  return {amp * std::exp(cplx(0.0, phase)), Q21Source::decreasing};
}

Q21Value q21_increasing(double beta, double S, double x) {
  const cplx i(0.0, 1.0);
  const cplx amp = i * std::sqrt(cplx(beta)) * std::pow(2.0, -0.75) * std::sqrt(kPi) *
                   std::exp(0.25 * kPi * beta) * reciprocal_gamma(cplx(1.0, 0.5 * beta));
  const double phase = -S + 0.5 * x + 0.5 * beta * std::log(x) + 0.5 * beta * kLn2;
  return {amp * std::exp(cplx(0.0, phase)), Q21Source::increasing};
}

double invert_beta(double beta, Regime regime) {
  switch (regime) {
    case Regime::A:
      return (1.0 + std::exp(-kPi * beta)) / kPi;
    case Regime::B:
      return (1.0 - std::exp(kPi * beta)) / kPi;
    default:
      throw std::invalid_argument("invert_beta: regime must be A or B");
  }
}

}  // namespace painleve
