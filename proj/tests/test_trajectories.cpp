// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pgn/trajectories.hpp"

using namespace pgn;

namespace {

Rational random_digits(std::mt19937_64& rng, int digits) {
  std::uniform_int_distribution<int> digit(0, 9);
  Integer num = 0, den = 1;
  for (int i = 0; i < digits; ++i) {
    num = num * 10 + digit(rng);
    den *= 10;
  }
  return Rational(num, den);
}

Problem random_problem(std::mt19937_64& rng, int m, int n, int digits) {
  RationalMatrix theta(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) theta(i, j) = random_digits(rng, digits);
  return build_problem(m, n, theta, digits);
}

Rational factorial(int d) {
  Rational f(1);
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

Rational product(const RationalVector& v) {
  Rational p(1);
  for (const auto& x : v) p *= x;
  return p;
}

TraceOptions quick() {
  TraceOptions o;
  o.threads = 2;
  return o;
}

}  // namespace

TEST_CASE("grid points are exact and close to the request") {
  Problem p = build_problem(1, 2, RationalMatrix(2, 1, Rational(0)));
  for (unsigned base : {2u, 3u, 10u}) {
    const PathSpec spec = path(p, PathKind::standard);
    auto grid = make_grid(spec, GridSpec{12.0, 24, base});
    REQUIRE(grid.size() == 24);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double want = 12.0 * static_cast<double>(k + 1) / 24.0;
      CHECK(std::fabs(grid[k].s.to_double() - want) <= 1e-8 * want + 1e-9);
      CHECK(grid[k].scale == 2);
      // denominator divides a power of the base
      Integer power;
      mpz_ui_pow_ui(power.get_mpz_t(), base, 64);
      CHECK(power % grid[k].u.get_den() == 0);
      CHECK(grid[k].u > 1);
    }
  }
  CHECK_THROWS_AS(grid_point(path(p, PathKind::standard), -1.0), InputError);
  CHECK_THROWS_AS(make_grid(path(p, PathKind::standard), GridSpec{10.0, 0, 2}), InputError);
}

TEST_CASE("zero Theta: psi_p = -1 for p <= m and m/n above") {
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
    Problem p = build_problem(m, n, RationalMatrix(n, m, Rational(0)));
    const PathSpec spec = path(p, PathKind::standard);
    auto samples = trace(p, PathKind::standard, make_grid(spec, GridSpec{10.0, 8, 2}), quick());
    for (const auto& smp : samples) {
      REQUIRE(smp.exact_lambdas);
      const Rational ut = pow(smp.point.u, smp.point.scale.get_si());  // e^s
      for (int i = 0; i < m + n; ++i) {
        // e_i has norm 1/width: e^{-s} on the x block, e^{ms/n} on the y block
        const Rational want = i < m ? Rational(1 / ut) : *exact_power(ut, make_rational(m, n));
        CHECK((*smp.exact_lambdas)[i] == want);
        const double psi = i < m ? -1.0 : static_cast<double>(m) / n;
        CHECK(smp.psi[i].to_double() == doctest::Approx(psi).epsilon(1e-12));
      }
      CHECK(std::fabs(smp.Psi.back().to_double()) < 1e-12);
    }
  }
}

TEST_CASE("theta = 1/2 at s = ln 4 against brute force") {
  Problem p = build_problem(1, 1, RationalMatrix(1, 1, make_rational(1, 2)));
  const PathSpec spec = path(p, PathKind::standard);
  GridPoint gp{Rational(4), path_scale(spec), HiFloat()};
  gp.s = log(HiFloat(Rational(4)));
  auto samples = trace(p, PathKind::standard, {gp}, quick());
  REQUIRE(samples.size() == 1);
  const RationalVector h{4, make_rational(1, 4)};
  auto brute = oracle::brute_force_minima(lattice(p).basis, h, 64);
  REQUIRE(brute.lambdas.size() == 2);
  CHECK(*samples[0].exact_lambdas == brute.lambdas);
  for (std::size_t i = 0; i < 2; ++i) {
    IntegerVector c;
    for (const auto& z : brute.coeffs[i]) c.push_back(z);
    CHECK(samples[0].witnesses[i] == c);
  }
}

TEST_CASE("Minkowski bound and psi ordering on every sample") {
  std::mt19937_64 rng(11);
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
    Problem p = random_problem(rng, m, n, 30);
    const int d = m + n;
    const Rational fact = factorial(d);
    for (PathKind kind : {PathKind::standard, PathKind::starred}) {
      auto samples = trace(p, kind, make_grid(path(p, kind), GridSpec{16.0, 16, 2}), quick());
      for (const auto& smp : samples) {
        REQUIRE(smp.exact_lambdas);
        const Rational prod = product(*smp.exact_lambdas);
        // covolume 1 and box volume 2^d: 1/d! <= prod lambda_i <= 1
        CHECK(prod <= 1);
        CHECK(prod * fact >= 1);
        for (int i = 1; i < d; ++i) CHECK((*smp.exact_lambdas)[i - 1] <= (*smp.exact_lambdas)[i]);
        const double sum = smp.Psi.back().to_double();
        CHECK(sum <= 1e-12);
        CHECK(-sum <= std::log(fact.get_d()) / smp.s() + 1e-12);
      }
    }
  }
}

TEST_CASE("thread count does not change samples") {
  std::mt19937_64 rng(5);
  Problem p = random_problem(rng, 2, 1, 25);
  auto grid = make_grid(path(p, PathKind::standard), GridSpec{14.0, 12, 2});
  TraceOptions one, many;
  one.threads = 1;
  many.threads = 4;
  auto a = trace(p, PathKind::standard, grid, one);
  auto b = trace(p, PathKind::standard, grid, many);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(*a[i].exact_lambdas == *b[i].exact_lambdas);
    CHECK(a[i].witnesses == b[i].witnesses);
  }
}

TEST_CASE("dual boxes at matched parameters: lambda*_p lambda_{d+1-p} in [1/d!, d!]") {
  std::mt19937_64 rng(23);
  // (1,2) and (2,1): standard and starred scales make u^{L rate} reciprocal at the same u
  for (auto [m, n] : {std::pair{1, 2}, {2, 1}, {1, 1}}) {
    Problem p = random_problem(rng, m, n, 30);
    const int d = m + n;
    const PathSpec std_spec = path(p, PathKind::standard), star_spec = path(p, PathKind::starred);
    auto grid = make_grid(std_spec, GridSpec{14.0, 10, 2});
    std::vector<GridPoint> star_grid;
    for (const auto& g : grid) {
      GridPoint gs{g.u, path_scale(star_spec), HiFloat()};
      gs.s = log(HiFloat(g.u)) * HiFloat(Rational(gs.scale));
      // widths must be exact reciprocals
      Box a = box_B_exact(std_spec, g.u, g.scale), b = box_B_exact(star_spec, gs.u, gs.scale);
      for (int i = 0; i < d; ++i) REQUIRE((*a.exact)[i] * (*b.exact)[i] == 1);
      star_grid.push_back(gs);
    }
    auto lam = trace(p, PathKind::standard, grid, quick());
    auto star = trace(p, PathKind::starred, star_grid, quick());
    const Rational fact = factorial(d);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      for (int q = 1; q <= d; ++q) {
        const Rational prod = (*star[k].exact_lambdas)[q - 1] * (*lam[k].exact_lambdas)[d - q];
        CHECK(prod * fact >= 1);
        CHECK(prod <= fact);
      }
      // matched starred parameter is (m / n) s
      CHECK(star[k].s() == doctest::Approx(lam[k].s() * m / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("tail windows and estimates") {
  std::vector<double> s, v;
  for (int i = 1; i <= 20; ++i) {
    s.push_back(i);
    v.push_back(-0.5);
  }
  Range r = tail_range(s, v, 0.5);
  CHECK(r.low == -0.5);
  CHECK(r.high == -0.5);
  CHECK_THROWS_AS(tail_range(s, v, 0.2), InsufficientSamples);
  CHECK_THROWS_AS(tail_range(s, v, 0.0), InputError);
  v[15] = -0.7;
  v[3] = -2.0;  // outside the window
  r = tail_range(s, v, 0.5);
  CHECK(r.low == -0.7);
  CHECK(r.high == -0.5);
}

TEST_CASE("conversion formulas") {
  // psi = 0 with m = n = 1 gives beta = alpha = 1
  ExponentPair e = first_type_exponents({0.0, 0.0}, 1, 1);
  CHECK(e.regular.value == doctest::Approx(1.0));
  CHECK(e.uniform.value == doctest::Approx(1.0));
  // psiHigh = 1/2, m = 1, n = 2: alpha = 3 / (2 * 3/2) - 1 = 0
  e = first_type_exponents({0.0, 0.5}, 1, 2);
  CHECK(e.uniform.value == doctest::Approx(0.0));
  // degenerate denominator
  e = first_type_exponents({-1.0, -0.5}, 1, 1);
  CHECK(e.regular.infinite);
  CHECK_FALSE(e.uniform.infinite);
  // d = 3, m = 1, n = 2, p = 2, kappa = 1/2, PsiLow = -1/4: b = (3/2) / (1/4) - 1 = 5
  ExponentPair f = second_type_exponents({-0.25, -0.25}, 1, 2, 2);
  CHECK(f.regular.value == doctest::Approx(5.0));
  // PsiLow = 0, m = n = 1, p = 1
  f = second_type_exponents({0.0, 0.0}, 1, 1, 1);
  CHECK(f.regular.value == doctest::Approx(1.0));
  // p = 1: second type equals first type
  for (double lo : {-0.3, -0.1, 0.0, 0.2}) {
    ExponentPair a = first_type_exponents({lo, lo + 0.1}, 2, 1);
    ExponentPair b = second_type_exponents({lo, lo + 0.1}, 2, 1, 1);
    CHECK(a.regular.value == doctest::Approx(b.regular.value));
    CHECK(a.uniform.value == doctest::Approx(b.uniform.value));
  }
}

TEST_CASE("golden ratio: psi_1 stays within 0.05 of 0") {
  Problem p = build_problem(1, 1, RationalMatrix(1, 1, oracle::golden_truncation(60)), 60);
  auto samples = trace(p, PathKind::standard, make_grid(path(p, PathKind::standard), GridSpec{30.0, 40, 2}), quick());
  SchmidtEstimate est = estimate_schmidt(samples, 0.5);
  CHECK(est.tail_samples == 21);
  CHECK(std::fabs(est.psi[0].low) <= 0.05);
  CHECK(std::fabs(est.psi[0].high) <= 0.05);
  // Continued-fraction oracle: every nonzero (x, y) has |x| |theta x - y| >=
  // c = min over convergent denominators q of q ||q theta||, and
  // lambda_1^2 >= |x| e^{-s} |theta x - y| e^{s}, so lambda_1^2 >= c.
  const Rational theta = oracle::golden_truncation(60);
  Rational c(1);
  for (const auto& q : oracle::convergent_denominators(theta, 80)) {
    if (q == 0) continue;
    if (q > Integer("100000000000000")) break;
    const Rational qt = theta * Rational(q);
    Integer near;
    mpz_fdiv_q(near.get_mpz_t(), qt.get_num_mpz_t(), qt.get_den_mpz_t());
    Rational dist = qt - Rational(near);
    if (dist > make_rational(1, 2)) dist = 1 - dist;
    c = std::min(c, Rational(Rational(q) * dist));
  }
  CHECK(c > make_rational(38, 100));  // q = 1 gives 1 - theta
  for (const auto& smp : samples) {
    const Rational l1 = (*smp.exact_lambdas)[0];
    CHECK(l1 <= 1);
    CHECK(l1 * l1 >= c);
  }
  // Psi_2 -> 0 within ln 2 / s
  CHECK(std::fabs(est.Psi[1].low) <= std::log(2.0) / est.s_low + 1e-12);
}

TEST_CASE("compound first minimum tracks psi_1 + psi_2") {
  std::mt19937_64 rng(3);
  Problem p = random_problem(rng, 1, 2, 40);
  auto grid = make_grid(path(p, PathKind::standard), GridSpec{24.0, 12, 2});
  auto base = trace(p, PathKind::standard, grid, quick());
  auto hat = trace_hat(p, 2, grid, quick());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    REQUIRE(hat[k].lambdas.size() == 1);
    const double diff = hat[k].psi[0].to_double() - base[k].Psi[1].to_double();
    // lambda_hat_1 and lambda_1 lambda_2 agree up to factors depending on d only
    CHECK(std::fabs(diff) * base[k].s() <= std::log(6.0) + 1e-9);
  }
}

TEST_CASE("exponent report shape") {
  std::mt19937_64 rng(9);
  Problem p = random_problem(rng, 1, 2, 40);
  ExponentReport rep = exponent_report(p, GridSpec{12.0, 20, 2}, 0.5, quick());
  CHECK(rep.grades.size() == 2);
  CHECK(rep.starred_horizon == doctest::Approx(6.0));
  CHECK(rep.standard.psi.size() == 3);
  for (const auto& g : rep.grades) CHECK(g.psi.low <= g.psi.high);
  // p = 1: first and second type coincide
  CHECK(rep.grades[0].first.regular.value == doctest::Approx(rep.grades[0].second.regular.value));

  Problem zero = build_problem(1, 1, RationalMatrix(1, 1, Rational(0)));
  ExponentReport z = exponent_report(zero, GridSpec{12.0, 20, 2}, 0.5, quick());
  CHECK(z.grades.size() == 1);
  CHECK(z.grades[0].first.regular.infinite);
  CHECK_FALSE(z.warnings.empty());
}
