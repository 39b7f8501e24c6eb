#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "painleve/connection.hpp"
#include "painleve/specfun.hpp"

using namespace painleve;

TEST_CASE("predict: regimes and fixed parameter values") {
  SUBCASE("a = 2/pi lies in the decreasing regime with beta = 0") {
    auto p = predict(2.0 / kPi);
    CHECK(p.regime == Regime::A);
    CHECK(std::fabs(p.beta) < 1e-14);
    CHECK(p.gamma_mod_pi);
  }
  SUBCASE("a = (1 - e^{-pi})/pi gives beta = -1") {
    auto p = predict((1.0 - std::exp(-kPi)) / kPi);
    CHECK(p.regime == Regime::B);
    CHECK(p.beta == doctest::Approx(-1.0).epsilon(1e-13));
  }
  SUBCASE("a = 1/pi is the separatrix with limit pi/2") {
    auto p = predict(1.0 / kPi);
    CHECK(p.regime == Regime::C);
    CHECK(p.limit_value == doctest::Approx(0.5 * kPi));
  }
  SUBCASE("a = 0 gives the exact solution parameters") {
    auto p = predict(0.0);
    CHECK(p.regime == Regime::B);
    CHECK(p.beta == 0.0);
    CHECK(p.gamma == 0.0);
  }
  SUBCASE("beta diverges monotonically toward the separatrix") {
    double prevB = 0.0, prevA = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double d = std::pow(10.0, -j);
      const double bB = predict(1.0 / kPi - d).beta;
      const double bA = predict(1.0 / kPi + d).beta;
      if (j > 1) {
        CHECK(bB < prevB);  // -> -inf
        CHECK(bA > prevA);  // -> +inf
      }
      prevB = bB;
      prevA = bA;
    }
  }
}

TEST_CASE("gamma_A") {
  SUBCASE("beta = 0 is pi/2 mod pi") {
    CHECK(gamma_A(0.0) == doctest::Approx(0.5 * kPi).epsilon(1e-13));
  }
  SUBCASE("beta = 1 cross-checked against the product-formula argument") {
    const double ref =
        reduce_mod(0.5 * kPi + 2.0 * oracle::log_gamma_product(cplx(0.5, -0.5)).imag() +
                       std::log(2.0),
                   kPi);
    CHECK(gamma_A(1.0) == doctest::Approx(ref).epsilon(1e-10));
  }
  SUBCASE("conjugation symmetry links beta and -beta") {
    const double g1 = 2.0 * arg_gamma(cplx(-0.5, 0.5));
    const double g2 = 2.0 * arg_gamma(cplx(-0.5, -0.5));
    CHECK(g1 == doctest::Approx(-g2).epsilon(1e-13));
  }
}

TEST_CASE("gamma_B") {
  SUBCASE("continuous at beta = 0") {
    CHECK(gamma_B(0.0) == 0.0);
    CHECK(std::fabs(gamma_B(1e-9)) < 1e-7);
    CHECK(std::fabs(gamma_B(-1e-9)) < 1e-7);
  }
  SUBCASE("odd in beta") {
    for (double b : {0.3, 1.0, 2.4}) CHECK(gamma_B(b) + gamma_B(-b) == doctest::Approx(0.0));
  }
  SUBCASE("beta = -1 against the product oracle") {
    const double ref =
        -2.0 * oracle::log_gamma_product(cplx(0.0, -0.5)).imag() - std::log(2.0) + kPi;
    CHECK(gamma_B(-1.0) == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("q21_origin") {
  CHECK(std::abs(q21_origin(0.0).value) == 0.0);
  CHECK(q21_origin(1.0 / kPi).value.imag() == doctest::Approx(std::pow(2.0, -0.75)));
  CHECK(q21_origin(1.0 / kPi).value.real() == 0.0);
  CHECK(std::norm(q21_origin(0.5).value) ==
        doctest::Approx(std::pow(2.0, -1.5) * 0.5 * kPi).epsilon(1e-14));
  CHECK_THROWS_AS(q21_origin(-0.1), std::domain_error);
}

TEST_CASE("q21 closed forms") {
  SUBCASE("modulus is independent of S and x") {
    const double b = 0.7;
    const double m0 = std::abs(q21_decreasing(b, 0.0, 1.0).value);
    for (double S : {0.0, 1.3, -2.0})
      for (double x : {1.0, 10.0, 321.0})
        CHECK(std::abs(q21_decreasing(b, S, x).value) == doctest::Approx(m0).epsilon(1e-14));
  }
  SUBCASE("decreasing-family modulus identity") {
    for (double b : {-1.2, -0.4, 0.0, 0.5, 1.7}) {
      const double m2 = std::norm(q21_decreasing(b, 0.3, 2.0).value);
      const double ref = std::pow(2.0, -0.5) * std::exp(-0.5 * kPi * b) *
                         std::cosh(0.5 * kPi * b);
      CHECK(m2 == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  SUBCASE("increasing-family modulus identity") {
    for (double b : {-1.5, -0.3, 0.4, 1.1}) {
      const double m2 = std::norm(q21_increasing(b, -0.4, 7.0).value);
      const double ref = std::pow(2.0, -1.5) * std::fabs(std::exp(kPi * b) - 1.0);
      CHECK(m2 == doctest::Approx(ref).epsilon(1e-12));
    }
  }
  SUBCASE("increasing-family entry vanishes with beta") {
    CHECK(std::abs(q21_increasing(0.0, 0.2, 5.0).value) == 0.0);
    CHECK(std::abs(q21_increasing(1e-12, 0.2, 5.0).value) < 1e-5);
  }
}

TEST_CASE("modulus consistency across the origin and large-x data") {
  // decreasing regime
  for (int j = 0; j < 20; ++j) {
    const double a = 1.0 / kPi + 0.05 + 0.1 * j;
    const auto p = predict(a);
    REQUIRE(p.regime == Regime::A);
    const double lhs = std::abs(q21_decreasing(p.beta, 0.9, 13.0).value);
    const double rhs = std::abs(q21_origin(a).value);
    CHECK(std::fabs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
  }
  // increasing regime
  for (int j = 0; j < 20; ++j) {
    const double a = (j + 0.5) / 20.0 * (1.0 / kPi) * 0.98;
    const auto p = predict(a);
    REQUIRE(p.regime == Regime::B);
    const double lhs = std::abs(q21_increasing(p.beta, -0.9, 6.0).value);
    const double rhs = std::abs(q21_origin(a).value);
    CHECK(std::fabs(lhs - rhs) < 1e-12 * std::max(1.0, rhs));
  }
}

TEST_CASE("invert_beta") {
  CHECK(invert_beta(0.0, Regime::A) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
  CHECK(invert_beta(0.0, Regime::B) == 0.0);
  const double b = -0.7;
  CHECK(predict(invert_beta(b, Regime::B)).beta == doctest::Approx(b).epsilon(1e-14));
  const double b2 = 0.9;
  CHECK(predict(invert_beta(b2, Regime::A)).beta == doctest::Approx(b2).epsilon(1e-14));
  CHECK_THROWS_AS(invert_beta(1.0, Regime::C), std::invalid_argument);
}
