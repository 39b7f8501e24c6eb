#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "painleve/asymfit.hpp"

using namespace painleve;

TEST_CASE("exact solution fits to sigma = +1, beta = gamma = 0") {
  auto traj = solve_ivp(0.0, 450.0, 1e-12);
  auto f = fit(traj, 100.0, 2);
  CHECK(f.sigma == 1);
  CHECK(std::fabs(f.beta_fit) < 1e-9);
  CHECK(std::fabs(f.gamma_fit) < 1e-9);
  auto cr = compare(f, predict(0.0), 1e-9, 1e-9);
  CHECK(cr.beta_ok);
  CHECK(cr.gamma_ok);
}

TEST_CASE("increasing family matches the closed form") {
  auto traj = solve_ivp(0.2, 810.0, 1e-11);
  auto f = fit(traj, 100.0, 3);
  CHECK(f.sigma == 1);
  const auto p = predict(0.2);
  CHECK(std::fabs(f.beta_fit - p.beta) <= std::max(f.drift * 4.0, 1e-3));
  auto cr = compare(f, p, 1e-3, 1e-2);
  CHECK(cr.beta_ok);
  CHECK(cr.gamma_ok);
  SUBCASE("window drift shrinks") {
    REQUIRE(f.windows.size() == 3);
    const double d01 = std::fabs(f.windows[0].beta - f.windows[1].beta);
    const double d12 = std::fabs(f.windows[1].beta - f.windows[2].beta);
    CHECK(d12 < d01);
  }
  SUBCASE("refined variant stays within tolerance too") {
    auto fr = fit(traj, 100.0, 3, true);
    CHECK(std::fabs(fr.beta_fit - p.beta) <= 1e-3);
  }
}

TEST_CASE("decreasing family matches the closed form") {
  auto traj = solve_ivp(1.0, 810.0, 1e-11);
  auto f = fit(traj, 100.0, 3);
  CHECK(f.sigma == -1);
  const auto p = predict(1.0);
  REQUIRE(p.regime == Regime::A);
  CHECK(std::fabs(f.beta_fit - p.beta) <= 1e-3);
  auto cr = compare(f, p, 1e-3, 1e-2);
  CHECK(cr.beta_ok);
  CHECK(cr.gamma_ok);
  CHECK(cr.gamma_mod_pi);
}

TEST_CASE("fit argument and regime validation") {
  auto traj = solve_ivp(0.2, 300.0, 1e-10);
  CHECK_THROWS_AS(fit(traj, 100.0, 3), std::invalid_argument);  // needs 800
  CHECK_THROWS_AS(fit(traj, 100.0, 1), std::invalid_argument);
  // separatrix plateau: the slope is near zero on early windows, which is
  // not an asymptotic regime
  auto tc = solve_ivp(1.0 / kPi, 40.0, 1e-10);
  CHECK_THROWS_AS(fit(tc, 8.0, 2), regime_error);
}

TEST_CASE("regime conflict raises classification_error") {
  auto traj = solve_ivp(0.2, 450.0, 1e-10);
  auto f = fit(traj, 100.0, 2);
  CHECK_THROWS_AS(compare(f, predict(1.0), 1e-3, 1e-2), classification_error);
  CHECK_THROWS_AS(compare(f, predict(1.0 / kPi), 1e-3, 1e-2), classification_error);
}

TEST_CASE("normal equations stay well conditioned") {
  for (double xlo : {50.0, 100.0, 400.0}) {
    auto traj = solve_ivp(0.15, xlo * 4.1, 1e-10);
    auto f = fit(traj, xlo, 2);
    CHECK(f.condition < 1e4);
  }
}

TEST_CASE("slope-expansion defect") {
  SUBCASE("exact solution: correction vanishes identically") {
    auto traj = solve_ivp(0.0, 450.0, 1e-12);
    CHECK(refined_slope_check(traj, 400.0, predict(0.0)) <= 1e-10);
  }
  SUBCASE("order X^-2 on the increasing family") {
    auto traj = solve_ivp(0.2, 900.0, 1e-11);
    const auto p = predict(0.2);
    // compare window maxima to damp the oscillatory prefactor
    auto wmax = [&](double X) {
      double m = 0.0;
      for (int i = 0; i < 40; ++i) m = std::max(m, refined_slope_check(traj, X * (1.0 + 0.3 * i / 39.0), p));
      return m;
    };
    const double m100 = wmax(100.0), m200 = wmax(200.0), m400 = wmax(400.0);
    CHECK(m200 < m100 / 2.0);
    CHECK(m400 < m200 / 2.0);
  }
  SUBCASE("decreasing family at X = 200") {
    auto traj = solve_ivp(1.0, 300.0, 1e-11);
    CHECK(refined_slope_check(traj, 200.0, predict(1.0)) <= 10.0 / (200.0 * 200.0));
  }
  SUBCASE("separatrix regime unsupported") {
    auto traj = solve_ivp(0.2, 300.0, 1e-10);
    CHECK_THROWS_AS(refined_slope_check(traj, 200.0, predict(1.0 / kPi)), regime_error);
  }
}

TEST_CASE("gamma formula holds across the decreasing-family parameter range") {
  // denser sweep protecting the arg-Gamma convention in gamma_A
  for (double a : {0.36, 0.42, 0.55, 0.8, 1.3}) {
    auto traj = solve_ivp(a, 810.0, 1e-11);
    auto f = fit(traj, 100.0, 3, true);
    const auto p = predict(a);
    REQUIRE(p.regime == Regime::A);
    CHECK(std::fabs(reduce_mod(f.gamma_fit - p.gamma, kPi)) < 5e-3);
    CHECK(std::fabs(f.beta_fit - p.beta) < 5e-4);
  }
}

TEST_CASE("parameters outside the acceptance grid") {
  SUBCASE("negative a sits in the increasing family with beta > 0") {
    auto traj = solve_ivp(-0.5, 810.0, 1e-11);
    auto f = fit(traj, 100.0, 3, true);
    const auto p = predict(-0.5);
    REQUIRE(p.regime == Regime::B);
    CHECK(p.beta > 0.0);
    CHECK(std::fabs(f.beta_fit - p.beta) < 1e-3);
    CHECK(std::fabs(f.gamma_fit - p.gamma) < 1e-2);
  }
  SUBCASE("larger a keeps the decreasing-family formulas") {
    auto traj = solve_ivp(2.0, 810.0, 1e-11);
    auto f = fit(traj, 100.0, 3, true);
    const auto p = predict(2.0);
    CHECK(std::fabs(f.beta_fit - p.beta) < 1e-3);
    CHECK(std::fabs(reduce_mod(f.gamma_fit - p.gamma, kPi)) < 1e-2);
  }
}

TEST_CASE("sigma equals the regime sign on the acceptance grid") {
  for (double a : {0.05, 0.25, 0.5, 1.0}) {
    auto traj = solve_ivp(a, 450.0, 1e-10);
    auto f = fit(traj, 100.0, 2);
    const auto p = predict(a);
    CHECK(((f.sigma == 1) == (p.regime == Regime::B)));
  }
}

TEST_CASE("json export shape") {
  auto traj = solve_ivp(0.2, 450.0, 1e-10);
  auto f = fit(traj, 100.0, 2);
  std::ostringstream os;
  write_fit_json(f, os);
  const std::string s = os.str();
  CHECK(s.find("\"sigma\":1") != std::string::npos);
  CHECK(s.find("\"windows\":[{") != std::string::npos);
}
