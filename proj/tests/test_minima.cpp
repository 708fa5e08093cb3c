// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pgn/minima.hpp"

using namespace pgn;

namespace {

LatticeBasis from_matrix(RationalMatrix a) { return {std::move(a), "test"}; }

RationalVector random_widths(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> num(1, 6), den(1, 6);
  RationalVector h;
  for (std::size_t i = 0; i < n; ++i) h.push_back(make_rational(num(rng), den(rng)));
  return h;
}

Rational product(const RationalVector& v) {
  Rational p(1);
  for (const auto& x : v) p *= x;
  return p;
}

// Random lattice of small covolume: a unimodular matrix with each row divided
// by a small integer, so brute force stays within reach.
RationalMatrix random_basis(std::mt19937_64& rng, std::size_t n) {
  RationalMatrix a = oracle::random_unimodular(rng, n, 6, 2);
  std::uniform_int_distribution<long> den(1, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const long q = den(rng);
    for (std::size_t j = 0; j < n; ++j) a(i, j) /= q;
  }
  return a;
}

}  // namespace

TEST_CASE("unit cube and Z^d") {
  for (int d = 1; d <= 5; ++d) {
    MinimaResult r = successive_minima(integer_lattice(d), make_box(RationalVector(d, Rational(1))));
    REQUIRE(r.exact_lambdas);
    for (const auto& l : *r.exact_lambdas) CHECK(l == 1);
    // coordinate vectors in reverse lexicographic order of coefficients
    CHECK(r.coefficients.size() == static_cast<std::size_t>(d));
  }
}

TEST_CASE("stretched box") {
  MinimaResult r = successive_minima(integer_lattice(2), make_box(RationalVector{2, make_rational(1, 2)}));
  CHECK(*r.exact_lambdas == RationalVector{make_rational(1, 2), 2});
  CHECK(r.witnesses[0] == RationalVector{1, 0});
  CHECK(r.witnesses[1] == RationalVector{0, 1});
}

TEST_CASE("engine agrees with brute force") {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 400 && compared < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    RationalMatrix basis = random_basis(rng, n);
    RationalVector h = random_widths(rng, n);
    oracle::BruteMinima brute = oracle::brute_force_minima(basis, h, n == 4 ? 6 : 20);
    if (brute.lambdas.empty()) continue;
    MinimaResult r = successive_minima(from_matrix(basis), make_box(h));
    REQUIRE(r.exact_lambdas);
    CHECK(*r.exact_lambdas == brute.lambdas);
    for (std::size_t k = 0; k < n; ++k) CHECK(r.coefficients[k] == brute.coeffs[k]);
    ++compared;
  }
  CHECK(compared >= 100);
}

TEST_CASE("Minkowski second theorem") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    RationalMatrix basis = random_basis(rng, n);
    RationalVector h = random_widths(rng, n);
    MinimaResult r = successive_minima(from_matrix(basis), make_box(h));
    // prod lambda_i * vol(box) / covolume in [2^n / n!, 2^n], with vol = 2^n prod h
    const Rational ratio = product(*r.exact_lambdas) * product(h) / abs(oracle::leibniz_det(basis));
    CHECK(ratio <= 1);
    CHECK(ratio * factorial(static_cast<int>(n)) >= 1);
  }
}

TEST_CASE("monotone and homogeneous") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    LatticeBasis lat = from_matrix(random_basis(rng, n));
    RationalVector h = random_widths(rng, n);
    RationalVector r = *successive_minima(lat, make_box(h)).exact_lambdas;
    for (std::size_t i = 1; i < n; ++i) CHECK(r[i - 1] <= r[i]);

    const Rational c = make_rational(3, 7);
    RationalVector rs = *successive_minima(lat, scaled(make_box(h), c)).exact_lambdas;
    for (std::size_t i = 0; i < n; ++i) CHECK(rs[i] * c == r[i]);

    // growing one side can only shrink the minima
    RationalVector g = h;
    g[trial % n] *= 2;
    RationalVector rg = *successive_minima(lat, make_box(g)).exact_lambdas;
    for (std::size_t i = 0; i < n; ++i) CHECK(rg[i] <= r[i]);
  }
}

TEST_CASE("witnesses are independent lattice vectors") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 2);
    RationalMatrix basis = random_basis(rng, n);
    RationalVector h = random_widths(rng, n);
    MinimaResult r = successive_minima(from_matrix(basis), make_box(h));
    std::vector<RationalVector> rows;
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(oracle::sup_box_norm(r.witnesses[k], h) == (*r.exact_lambdas)[k]);
      RationalVector v(n, Rational(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[i] += basis(i, j) * r.coefficients[k][j];
      CHECK(v == r.witnesses[k]);
      rows.push_back(v);
    }
    CHECK(oracle::rank_of(rows) == n);
  }
}

TEST_CASE("certified float agrees with exact") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    LatticeBasis lat = from_matrix(random_basis(rng, n));
    RationalVector h = random_widths(rng, n);
    MinimaResult ex = successive_minima(lat, make_box(h));
    Box fl = make_box(h);
    fl.exact.reset();
    MinimaOptions opt;
    opt.mode = MinimaMode::certified_float;
    MinimaResult fr = successive_minima(lat, fl, opt);
    CHECK(fr.error_bound <= 1e-9);
    for (std::size_t i = 0; i < n; ++i) CHECK(fr.lambdas[i].encloses((*ex.exact_lambdas)[i]));
  }
}

TEST_CASE("problem lattices on a path") {
  // Lambda for theta = 1/2 with B(s) at u = 2: widths (2, 1/2)
  Problem half = build_problem(1, 1, RationalMatrix(1, 1, make_rational(1, 2)));
  PathSpec spec = path(half, PathKind::standard);
  MinimaResult r = successive_minima(lattice(half), box_B_exact(spec, Integer(2), Integer(1)));
  // (x, y - x/2): x = 0, y = 1 gives norm 2; x = 2, y = 1 gives (2, 0) with norm 1
  CHECK((*r.exact_lambdas)[0] == 1);
  CHECK(product(*r.exact_lambdas) <= 1);
  CHECK(product(*r.exact_lambdas) * 2 >= 1);

  // Duality against the polar body gives [1, d!]; the polar of a box is a
  // cross-polytope sandwiched between the reciprocal box and d times it,
  // so with boxes on both sides the product lies in [1/d, d!].
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> num(-40, 40), den(3, 97);
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
    RationalMatrix theta(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) theta(i, j) = make_rational(num(rng), den(rng));
    Problem p = build_problem(m, n, theta);
    PathSpec fwd = path(p, PathKind::standard);
    RationalVector neg;
    for (const auto& x : fwd.rates) neg.push_back(-x);
    PathSpec back = custom_path(neg);
    const Integer scale = path_scale(fwd);
    const int d = p.d();
    for (long u : {2L, 3L, 5L}) {
      RationalVector a = *successive_minima(lattice(p), box_B_exact(fwd, Integer(u), scale)).exact_lambdas;
      RationalVector b = *successive_minima(dual_lattice(p), box_B_exact(back, Integer(u), scale)).exact_lambdas;
      for (int i = 0; i < d; ++i) {
        Rational prod = a[static_cast<std::size_t>(d - 1 - i)] * b[static_cast<std::size_t>(i)];
        CHECK(prod * d >= 1);
        CHECK(prod <= factorial(d));
      }
    }
  }
}

TEST_CASE("compound first minimum") {
  Problem p = build_problem(1, 2, RationalMatrix(2, 1, oracle::golden_truncation(30)), 30);
  MinimaResult r = compound_first_minimum(p, 2, Integer(3), path_scale(path(p, PathKind::standard)));
  REQUIRE(r.exact_lambdas);
  CHECK(r.lambdas.size() == 1);
  CHECK((*r.exact_lambdas)[0] > 0);
}

TEST_CASE("budget") {
  MinimaOptions opt;
  opt.budget = 3;
  RationalMatrix skew = identity_matrix(4);
  skew(0, 1) = make_rational(1, 3);
  skew(2, 3) = make_rational(2, 5);
  CHECK_THROWS_AS(successive_minima(from_matrix(skew), make_box(RationalVector(4, Rational(1))), opt), BudgetExceeded);
}

TEST_CASE("degenerate orthogonal lattice at large scale") {
  // Z^3 against widths (e^s, e^{-s/2}, e^{-s/2}) at u = 10^8: plain
  // enumeration would face ~10^24 points.
  Problem zero = build_problem(1, 2, RationalMatrix(2, 1, Rational(0)));
  PathSpec spec = path(zero, PathKind::standard);
  const Integer u("100000000");
  MinimaResult r = successive_minima(lattice(zero), box_B_exact(spec, u, path_scale(spec)));
  const Rational uu(u);
  CHECK((*r.exact_lambdas)[0] == 1 / (uu * uu));
  CHECK((*r.exact_lambdas)[1] == uu);
  CHECK((*r.exact_lambdas)[2] == uu);
}
