// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pgn/numerics.hpp"

using namespace pgn;

TEST_CASE("rationals are canonical on construction") {
  Rational a = make_rational(6, -4);
  CHECK(a.get_num() == -3);
  CHECK(a.get_den() == 2);
  CHECK(make_rational(2, 4) == make_rational(1, 2));
  CHECK_THROWS_AS(make_rational(1, 0), InputError);
}

TEST_CASE("parse_rational accepts fractions and decimals") {
  CHECK(parse_rational("3/4") == make_rational(3, 4));
  CHECK(parse_rational("-10/4") == make_rational(-5, 2));
  CHECK(parse_rational("0.618") == make_rational(618, 1000));
  CHECK(parse_rational("-1.5e-3") == make_rational(-3, 2000));
  CHECK(parse_rational("  7 ") == Rational(7));
  CHECK(parse_rational(".5") == make_rational(1, 2));
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational(""), InputError);
}

TEST_CASE("mat_mul") {
  std::mt19937_64 seed_rng(1);
  RationalMatrix a = oracle::random_integer_matrix(seed_rng, 3, -5, 5);
  CHECK(mat_mul(identity_matrix(3), a) == a);

  const Rational theta = make_rational(3, 7);
  RationalMatrix lower(2, 2, Rational(0)), lower_inv(2, 2, Rational(0));
  lower(0, 0) = lower(1, 1) = lower_inv(0, 0) = lower_inv(1, 1) = 1;
  lower(1, 0) = theta;
  lower_inv(1, 0) = -theta;
  CHECK(mat_mul(lower, lower_inv) == identity_matrix(2));

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    RationalMatrix x = oracle::random_integer_matrix(rng, 3, -9, 9);
    RationalMatrix y = oracle::random_integer_matrix(rng, 3, -9, 9);
    CHECK(mat_mul(x, y) == oracle::schoolbook(x, y));
  }
  CHECK_THROWS_AS(mat_mul(RationalMatrix(2, 3, Rational(1)), RationalMatrix(2, 3, Rational(1))), DimensionError);
}

TEST_CASE("mat_inverse") {
  CHECK(mat_inverse(identity_matrix(4)) == identity_matrix(4));

  // T = [[E_m, 0], [Theta, E_n]] inverts to [[E_m, 0], [-Theta, E_n]]
  RationalMatrix t = identity_matrix(3);
  t(1, 0) = make_rational(1, 2);
  t(2, 0) = make_rational(-2, 3);
  RationalMatrix expected = identity_matrix(3);
  expected(1, 0) = make_rational(-1, 2);
  expected(2, 0) = make_rational(2, 3);
  CHECK(mat_inverse(t) == expected);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    RationalMatrix u = oracle::random_unimodular(rng, 4, 12, 2);
    RationalMatrix inv = mat_inverse(u);
    CHECK(inv == oracle::adjugate_inverse(u));
    CHECK(abs(det(inv)) == 1);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(inv(i, j).get_den() == 1);
  }

  RationalMatrix singular(2, 2, Rational(1));
  CHECK_THROWS_AS(mat_inverse(singular), SingularMatrixError);
}

TEST_CASE("det") {
  CHECK(det(identity_matrix(5)) == 1);
  RationalMatrix diag(2, 2, Rational(0));
  diag(0, 0) = 2;
  diag(1, 1) = 3;
  CHECK(det(diag) == 6);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 1 + trial % 4;
    RationalMatrix a = oracle::random_integer_matrix(rng, n, -4, 4);
    RationalMatrix b = oracle::random_integer_matrix(rng, n, -4, 4);
    CHECK(det(a) == oracle::leibniz_det(a));
    CHECK(det(mat_mul(a, b)) == det(a) * det(b));
  }
}

TEST_CASE("exact inverse property on random rational matrices") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
  for (int trial = 0; trial < 25; ++trial) {
    RationalMatrix a(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) a(i, j) = make_rational(num(rng), den(rng));
    if (det(a) == 0) continue;
    CHECK(mat_mul(a, mat_inverse(a)) == identity_matrix(3));
  }
}

TEST_CASE("HiFloat error bounds enclose the exact result") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 999999);
  for (int trial = 0; trial < 1000; ++trial) {
    Rational a = make_rational(num(rng), den(rng));
    Rational b = make_rational(num(rng), den(rng));
    Rational c = make_rational(num(rng), den(rng));
    if (b == 0) b = 1;
    // ((a + b) * c - a) / b, evaluated both ways
    Rational exact = ((a + b) * c - a) / b;
    for (mpfr_prec_t prec : {24, 53, 128}) {
      HiFloat fa(a, prec), fb(b, prec), fc(c, prec);
      HiFloat approx = ((fa + fb) * fc - fa) / fb;
      REQUIRE(approx.encloses(exact));
    }
  }
}

TEST_CASE("HiFloat exp and log bounds") {
  // exp(ln q) must enclose q; the error bounds compose.
  for (long q : {2L, 3L, 10L, 12345L}) {
    HiFloat x(Rational(q), 64);
    HiFloat y = exp(log(x));
    CHECK(y.encloses(Rational(q)));
    CHECK(y.relative_err() < 1e-15);
  }
  // e^1 enclosure from a 256-bit reference
  HiFloat e = exp(HiFloat(Rational(1), 53));
  Real ref = exp(Real(Rational(1), 256));
  CHECK(e.encloses(ref.to_rational()));
  CHECK_THROWS_AS(log(HiFloat(Rational(0))), PrecisionExhausted);
}

TEST_CASE("certified comparison") {
  CHECK(certainly_less(HiFloat(Rational(1)), HiFloat(Rational(2))));
  CHECK(compare_certified(HiFloat(make_rational(1, 3)), HiFloat(make_rational(1, 3))) == 0);
  CHECK_THROWS_AS(certainly_less(HiFloat(make_rational(1, 3)), HiFloat(make_rational(1, 3))), PrecisionExhausted);
}

TEST_CASE("IndependenceTracker") {
  IndependenceTracker t(3);
  CHECK(t.try_add(IntegerVector{1, 0, 0}));
  CHECK(t.try_add(IntegerVector{1, 1, 0}));
  CHECK_FALSE(t.try_add(IntegerVector{3, 2, 0}));
  CHECK(t.try_add(IntegerVector{0, 0, 5}));
  CHECK(t.rank() == 3);
}
