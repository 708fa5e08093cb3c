// SPDX-License-Identifier: Apache-2.0
//
// Brute-force oracles for the inequality systems behind the Diophantine
// exponents, evaluated exactly at small scale, plus the per-t threshold
// ("staircase") exponents obtained by bisection in gamma.
//
// Second-type systems are available in two norms: the sup-norm in the
// e-basis (as in the definition) and the sup-norm in the basis
// L_rho ^ E_rho' ("Theta-basis"). In the Theta-basis the original and the
// modified systems have identical solution sets, and for grade 1 they are
// literally the first-type system.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgn/exterior.hpp"
#include "pgn/minima.hpp"
#include "pgn/problem.hpp"
#include "pgn/trajectories.hpp"

namespace pgn {

enum class CertificateKind { first_type, second_type_original, second_type_modified };
enum class WedgeNorm { standard, theta };

const char* to_string(CertificateKind kind);
const char* to_string(WedgeNorm norm);

struct SolutionCertificate {
  CertificateKind kind = CertificateKind::first_type;
  WedgeNorm norm = WedgeNorm::standard;
  int grade = 1;
  Rational t;
  Rational gamma;
  /// First type: p integer vectors (x, y). Second type: the coefficients of
  /// one integer multivector Z in the lexicographic basis.
  std::vector<IntegerVector> vectors;
};

struct OracleOptions {
  std::uint64_t budget = 10'000'000;
};

/// Exact test of v <= t^e for v >= 0, t > 0.
bool le_power(const Rational& v, const Rational& t, const Rational& e);

/// t^e prepared for many exact comparisons.
class PowerBound {
 public:
  PowerBound(const Rational& t, const Rational& e);
  bool admits(const Rational& v) const;  // v <= t^e, v >= 0
  /// A rational no smaller than t^e.
  Rational upper() const;

 private:
  Rational t_, e_;
  std::optional<Rational> exact_;
  HiFloat log_;  // e ln t
  HiFloat value_;
};

/// |x| <= t and |Theta x - y| <= t^{-gamma}, with z = (x, y).
bool satisfies_first_type(const Problem& problem, const IntegerVector& z, const Rational& gamma, const Rational& t);

/// Searches |x| <= t and every y within t^{-gamma} of Theta x, in
/// lexicographic order, for p independent solutions.
std::optional<SolutionCertificate> first_type_feasible(const Problem& problem, int p, const Rational& gamma,
                                                       const Rational& t, const OracleOptions& options = {});

/// The constraint system of one second-type variant, precomputed as linear
/// forms on the coefficients of Z.
class SecondTypeSystem {
 public:
  SecondTypeSystem(const Problem& problem, int p, CertificateKind variant, WedgeNorm norm);

  int grade() const { return p_; }
  std::size_t size() const { return r_; }
  CertificateKind variant() const { return variant_; }
  WedgeNorm norm() const { return norm_; }
  /// Largest |form(Z)| for each constraint level k, in order.
  std::vector<Rational> levels(const RationalVector& z) const;
  /// Exponent 1 - (k - k0)(1 + gamma) of each level.
  std::vector<Rational> exponents(const Rational& gamma) const;
  std::vector<PowerBound> bounds(const Rational& gamma, const Rational& t) const;
  static bool satisfied(const std::vector<Rational>& levels, const std::vector<PowerBound>& bounds);
  bool satisfied(const RationalVector& z, const Rational& gamma, const Rational& t) const;

 private:
  int p_;
  std::size_t r_;
  CertificateKind variant_;
  WedgeNorm norm_;
  int k0_;
  std::vector<int> ks_;
  std::vector<std::vector<RationalVector>> forms_;  // per level
};

/// Exhaustive search over nonzero integer Z with |Z| <= bound (first nonzero
/// coefficient positive), lexicographic order.
std::optional<SolutionCertificate> second_type_feasible(const Problem& problem, int p, const Rational& gamma,
                                                        const Rational& t, CertificateKind variant, long bound,
                                                        WedgeNorm norm = WedgeNorm::standard,
                                                        const OracleOptions& options = {});

/// Smallest e-basis bound that makes the Theta-norm search exhaustive at t.
long exhaustive_bound(const Problem& problem, int p, const Rational& t);

/// Calls visit(Z) for every nonzero Z in [-bound, bound]^r with first
/// nonzero coefficient positive, in lexicographic order, until visit returns
/// false. Throws BudgetExceeded past the budget.
void for_each_multivector(std::size_t r, long bound, std::uint64_t budget,
                          const std::function<bool(const RationalVector&)>& visit);

struct AgreementReport {
  std::size_t probes = 0;       // (gamma, t) pairs
  std::size_t evaluations = 0;  // Z tested
  std::size_t mismatches = 0;
  std::string first_mismatch;

  bool agree() const { return mismatches == 0; }
};

/// Solution sets of the original and modified systems in the Theta-basis,
/// compared vector by vector. Requires t >= 1 and 1 + gamma > 0.
AgreementReport equivalence_check(const Problem& problem, int p, const std::vector<Rational>& gammas,
                                  const std::vector<Rational>& ts, long bound, const OracleOptions& options = {});

/// Maps coordinates (x, y) to (y, x): i -> i - m for i >= m, else i + n.
std::vector<int> transfer_permutation(int m, int n);

/// Z solves the modified system of (Theta, p) iff the permuted *Z solves the
/// modified system of (-Theta^t, d - p); checked vector by vector.
AgreementReport hodge_transfer_check(const Problem& problem, int p, const std::vector<Rational>& gammas,
                                     const std::vector<Rational>& ts, long bound, const OracleOptions& options = {});

/// Grade one: the first-type oracle and the Theta-basis second-type oracle
/// agree on feasibility at every probe.
AgreementReport grade_one_check(const Problem& problem, const std::vector<Rational>& gammas,
                                const std::vector<Rational>& ts, const OracleOptions& options = {});

enum class StaircaseKind { first_type, second_type };
enum class FeasibilityEngine { minima, oracle };

const char* to_string(StaircaseKind kind);

struct StaircaseOptions {
  FeasibilityEngine engine = FeasibilityEngine::minima;
  double tolerance = 1e-3;
  double gamma_low = -1.0 + 1e-3;
  double gamma_high = 20.0;
  OracleOptions oracle;
};

struct StaircasePoint {
  Rational t;
  double s = 0.0;      // ln t
  double gamma = 0.0;  // threshold, within tolerance
  bool infinite = false;      // feasible at gamma_high
  bool below_bracket = false;  // infeasible at gamma_low
  bool degenerate = false;     // a probe ran out of budget; gamma unset
};

/// Feasibility at (gamma, t): lambda_p(P_gamma(t)) <= 1 (first type) or
/// lambda_1(P_hat_gamma(t)) <= 1 w.r.t. wedge^p(Lambda) (second type); the
/// oracle engine answers the same question by exhaustive search.
bool feasible(const Problem& problem, int p, StaircaseKind kind, const Rational& gamma, const Rational& t,
              const StaircaseOptions& options = {});

/// Per-t search for sup{gamma : feasible}: an upward ladder 1, 2, 4, ...
/// up to gamma_high brackets the threshold, then bisection.
std::vector<StaircasePoint> staircase_exponent(const Problem& problem, int p, const std::vector<Rational>& ts,
                                               StaircaseKind kind, const StaircaseOptions& options = {},
                                               unsigned threads = 0);

/// Tail window over ln t, skipping degenerate points: low approximates the uniform exponent, high the
/// regular one.
ExponentPair staircase_estimate(const std::vector<StaircasePoint>& points, double window = 0.5);

/// t = u^L for each grid point of the standard path, so ln t = s.
std::vector<Rational> staircase_ts(const std::vector<GridPoint>& grid);

}  // namespace pgn
