// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "pgn/exterior.hpp"

using namespace pgn;

namespace {

Multivector vec(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return Multivector::from_vector(v);
}

// Compound matrix from Leibniz minors; independent of pgn::det.
RationalMatrix compound_oracle(const RationalMatrix& a, int p) {
  const int d = static_cast<int>(a.rows());
  auto subsets = all_subsets(d, p);
  RationalMatrix out(subsets.size(), subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i)
    for (std::size_t j = 0; j < subsets.size(); ++j) {
      RationalMatrix minor(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
      for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v) minor(u, v) = a(subsets[i][u], subsets[j][v]);
      out(i, j) = oracle::leibniz_det(minor);
    }
  return out;
}

}  // namespace

TEST_CASE("subset rank and unrank") {
  CHECK(subset_rank(Subset{0, 1}, 3) == 0);
  CHECK(subset_rank(Subset{1, 2}, 3) == 2);
  CHECK(subset_unrank(1, 2, 3) == Subset{0, 2});
  CHECK_THROWS_AS(subset_unrank(3, 2, 3), std::out_of_range);
  CHECK_THROWS_AS(subset_rank(Subset{2, 1}, 3), std::out_of_range);

  // exhaustive round trip, d = 5
  for (int k = 0; k <= 5; ++k) {
    auto subsets = all_subsets(5, k);
    REQUIRE(subsets.size() == binomial(5, k));
    for (std::size_t r = 0; r < subsets.size(); ++r) {
      CHECK(subset_rank(subsets[r], 5) == r);
      CHECK(subset_unrank(r, k, 5) == subsets[r]);
    }
  }
}

TEST_CASE("wedge products") {
  Multivector e1 = vec({1, 0, 0}), e2 = vec({0, 1, 0});
  CHECK(wedge(e1, e2) == Multivector::basis(3, {0, 1}));
  CHECK(wedge(e2, e1) == Rational(-1) * Multivector::basis(3, {0, 1}));
  CHECK(wedge(e1 + e2, e1 - e2) == Rational(-2) * Multivector::basis(3, {0, 1}));
  CHECK(wedge(Multivector::scalar(3, 5), e1) == Rational(5) * e1);
  CHECK_THROWS_AS(wedge(Multivector::basis(3, {0, 1}), Multivector::basis(3, {0, 2})), DimensionError);
}

TEST_CASE("wedge is associative and graded-anticommutative") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> c(-3, 3);
  auto random_mv = [&](int d, int p) {
    Multivector z(d, p);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = c(rng);
    return z;
  };
  for (int trial = 0; trial < 20; ++trial) {
    Multivector a = random_mv(5, 1), b = random_mv(5, 2), cc = random_mv(5, 2);
    CHECK(wedge(wedge(a, b), cc) == wedge(a, wedge(b, cc)));
    CHECK(wedge(a, b) == wedge(b, a));  // (-1)^{1*2} = 1
    Multivector x = random_mv(5, 1), y = random_mv(5, 1);
    CHECK(wedge(x, y) == Rational(-1) * wedge(y, x));
  }
}

TEST_CASE("wedge of d vectors is the determinant") {
  std::mt19937_64 rng(23);
  for (int d = 1; d <= 5; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      RationalMatrix a = oracle::random_integer_matrix(rng, static_cast<std::size_t>(d), -5, 5);
      Multivector acc = Multivector::scalar(d, 1);
      for (int j = 0; j < d; ++j) acc = wedge(acc, Multivector::from_vector(a.column(static_cast<std::size_t>(j))));
      CHECK(acc[0] == oracle::leibniz_det(a));
    }
  }
}

TEST_CASE("compound matrices") {
  CHECK(compound_matrix(identity_matrix(4), 2) == identity_matrix(6));

  RationalMatrix diag(3, 3, Rational(0));
  diag(0, 0) = 2;
  diag(1, 1) = 3;
  diag(2, 2) = 5;
  RationalMatrix expected(3, 3, Rational(0));
  expected(0, 0) = 6;   // {1,2}
  expected(1, 1) = 10;  // {1,3}
  expected(2, 2) = 15;  // {2,3}
  CHECK(compound_matrix(diag, 2) == expected);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    RationalMatrix a = oracle::random_integer_matrix(rng, 4, -4, 4);
    RationalMatrix b = oracle::random_integer_matrix(rng, 4, -4, 4);
    CHECK(compound_matrix(a, 2) == compound_oracle(a, 2));
    CHECK(compound_oracle(mat_mul(a, b), 2) == mat_mul(compound_oracle(a, 2), compound_oracle(b, 2)));
    CHECK(compound_matrix(a, 4)(0, 0) == oracle::leibniz_det(a));
  }
}

TEST_CASE("Hodge star") {
  CHECK(hodge_star(Multivector::basis(3, {0, 1})) == Multivector::basis(3, {2}));
  CHECK(hodge_star(Multivector::basis(3, {0, 2})) == Rational(-1) * Multivector::basis(3, {1}));
  CHECK(hodge_star(Multivector::scalar(3, 1)) == Multivector::basis(3, {0, 1, 2}));

  for (int d = 1; d <= 6; ++d) {
    for (int p = 0; p <= d; ++p) {
      const Rational sign = (p * (d - p)) % 2 == 0 ? 1 : -1;
      for (const auto& s : all_subsets(d, p)) {
        Multivector e = Multivector::basis(d, s);
        Multivector star = hodge_star(e);
        CHECK(hodge_star(star) == sign * e);
        CHECK(sup_norm(star) == 1);
        // e ^ *e is the volume element
        CHECK(wedge(e, star) == Multivector::basis(d, complement({}, d)));
      }
    }
  }
}

TEST_CASE("hat_tau") {
  CHECK(hat_tau(std::vector<Rational>(4, Rational(0)), 2) == std::vector<Rational>(6, Rational(0)));
  std::vector<Rational> tau = {2, 0, -2};
  CHECK(hat_tau(tau, 2) == std::vector<Rational>{2, 0, -2});
  const Rational s = make_rational(7, 3);
  std::vector<Rational> t4 = {s, s, -s, -s};
  CHECK(hat_tau(t4, 2) == std::vector<Rational>{2 * s, 0, 0, 0, 0, -2 * s});

  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> c(-9, 9);
  for (int d = 2; d <= 7; ++d) {
    std::vector<Rational> t(static_cast<std::size_t>(d));
    Rational sum(0);
    for (int i = 0; i + 1 < d; ++i) {
      t[static_cast<std::size_t>(i)] = make_rational(c(rng), 4);
      sum += t[static_cast<std::size_t>(i)];
    }
    t.back() = -sum;
    for (int p = 1; p < d; ++p) {
      Rational hs(0);
      for (const auto& x : hat_tau(t, p)) hs += x;
      CHECK(hs == 0);
    }
  }
}

TEST_CASE("sup norm") {
  CHECK(sup_norm(Multivector::basis(4, {1, 3})) == 1);
  Multivector z = Rational(3) * Multivector::basis(3, {0, 1}) - Rational(5) * Multivector::basis(3, {1, 2});
  CHECK(sup_norm(z) == 5);
  CHECK(sup_norm(Multivector(3, 2)) == 0);
}

TEST_CASE("coordinate permutation commutes with wedge") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int d = 2; d <= 5; ++d) {
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
      std::shuffle(perm.begin(), perm.end(), rng);
      for (int p = 1; p <= d; ++p) {
        Multivector direct = Multivector::scalar(d, Rational(1));
        Multivector moved = Multivector::scalar(d, Rational(1));
        for (int k = 0; k < p; ++k) {
          RationalVector v(static_cast<std::size_t>(d)), w(static_cast<std::size_t>(d));
          for (int i = 0; i < d; ++i) {
            v[static_cast<std::size_t>(i)] = c(rng);
            w[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = v[static_cast<std::size_t>(i)];
          }
          direct = wedge(direct, Multivector::from_vector(v));
          moved = wedge(moved, Multivector::from_vector(w));
        }
        CHECK(permute(direct, perm) == moved);
      }
    }
  }
  CHECK_THROWS_AS(permute(Multivector::basis(3, {0}), {0, 0, 1}), DimensionError);
}
