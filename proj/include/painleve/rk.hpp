#pragma once

// Embedded Dormand-Prince 5(4) step with 4th-order continuous extension and
// PI step-size control.  The step kernel is header-only and templated on the
// state dimension so the same engine drives both the real (phi, phi') system
// and the complex 2x2 linear systems (stored as flat real arrays).

#include <array>
#include <cmath>
#include <cstddef>

namespace painleve::rk {

// Butcher tableau (Dormand & Prince, order 5(4), FSAL).
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                        a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// e = b5 - b4 (error weights)
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output weights
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

/// One accepted step together with its continuous extension on [x0, x0+h].
template <std::size_t N>
struct DenseStep {
  double x0 = 0.0;
  double h = 0.0;
  std::array<double, N> y0{}, y1{};
  std::array<std::array<double, N>, 5> rcont{};

  double x1() const { return x0 + h; }
  bool contains(double x) const { return x >= x0 && x <= x0 + h; }

  std::array<double, N> eval(double x) const {
    const double th = (x - x0) / h, th1 = 1.0 - th;
    std::array<double, N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = rcont[0][i] +
             th * (rcont[1][i] + th1 * (rcont[2][i] + th * (rcont[3][i] + th1 * rcont[4][i])));
    return y;
  }

  /// d/dx of the continuous extension.
  std::array<double, N> eval_derivative(double x) const {
    const double th = (x - x0) / h;
    const double g2 = 1.0 - 2.0 * th;                        // d/dth th*th1
    const double g3 = th * (2.0 - 3.0 * th);                 // d/dth th^2*th1
    const double g4 = 2.0 * th * (1.0 - th) * (1.0 - 2.0 * th);  // d/dth th^2*th1^2
    std::array<double, N> d;
    for (std::size_t i = 0; i < N; ++i)
      d[i] = (rcont[1][i] + g2 * rcont[2][i] + g3 * rcont[3][i] + g4 * rcont[4][i]) / h;
    return d;
  }
};

template <std::size_t N>
struct StepTrial {
  double err = 0.0;                 // weighted RMS error estimate (accept iff <= 1)
  std::array<double, N> y1{};
  std::array<double, N> k_end{};    // f(x+h, y1), FSAL slope for the next step
  DenseStep<N> dense;
};

/// Evaluate one trial step of size h from (x, y) with k1 = f(x, y) given.
/// f has signature void(double x, const std::array<double,N>&, std::array<double,N>&).
template <std::size_t N, class F>
StepTrial<N> try_step(F&& f, double x, const std::array<double, N>& y,
                      const std::array<double, N>& k1, double h, double rtol, double atol) {
  std::array<double, N> k2, k3, k4, k5, k6, k7, t;
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
  f(x + c2 * h, t, k2);
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  f(x + c3 * h, t, k3);
  for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  f(x + c4 * h, t, k4);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  f(x + c5 * h, t, k5);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  f(x + h, t, k6);
  StepTrial<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out.y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  f(x + h, out.y1, k7);
  out.k_end = k7;

  double errsum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double ei =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(out.y1[i]));
    errsum += (ei / sc) * (ei / sc);
  }
  out.err = std::sqrt(errsum / static_cast<double>(N));

  DenseStep<N>& ds = out.dense;
  ds.x0 = x;
  ds.h = h;
  ds.y0 = y;
  ds.y1 = out.y1;
  for (std::size_t i = 0; i < N; ++i) {
    const double ydiff = out.y1[i] - y[i];
    const double bspl = h * k1[i] - ydiff;
    ds.rcont[0][i] = y[i];
    ds.rcont[1][i] = ydiff;
    ds.rcont[2][i] = bspl;
    ds.rcont[3][i] = ydiff - h * k7[i] - bspl;
    ds.rcont[4][i] =
        h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
  }
  return out;
}

/// PI step-size controller state (Hairer's dopri5 defaults).
class Controller {
 public:
  double next_h(double h, double err, bool* accept) {
    const double expo1 = 0.2 - kBeta * 0.75;
    const double fac11 = std::pow(std::max(err, 1e-30), expo1);
    if (err <= 1.0) {
      *accept = true;
      double fac = fac11 / std::pow(facold_, kBeta);
      fac = std::max(kFacc2, std::min(kFacc1, fac / kSafe));
      double hnew = h / fac;
      facold_ = std::max(err, 1e-4);
      if (rejected_) hnew = std::min(std::fabs(hnew), std::fabs(h)) * (h < 0 ? -1.0 : 1.0);
      rejected_ = false;
      return hnew;
    }
    *accept = false;
    rejected_ = true;
    return h / std::min(kFacc1, fac11 / kSafe);
  }

 private:
  static constexpr double kBeta = 0.04, kSafe = 0.9, kFacc1 = 5.0, kFacc2 = 0.1;
  double facold_ = 1e-4;
  bool rejected_ = false;
};

}  // namespace painleve::rk
