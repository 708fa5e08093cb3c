// SPDX-License-Identifier: Apache-2.0
//
// Invariant harness: generated problems, both pipelines, and every relation
// between Schmidt's and Diophantine exponents checked with explicit slack.
//
// Margins are signed: >= 0 means the relation holds without slack, and a
// check passes iff worst_margin >= -tolerance. Exact checks use tolerance 0.
// O(1/s) identities report their margins in units of a per-instance scale
// (ln(d!)/s_window, times n/m and (p+1)/2 for the starred ones), so that one
// tolerance multiplier covers every instance. Second-type exponents compared across Theta and Theta^t, or against the
// staircase, come from psi_hat_1 of the compound lattice.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pgn/problem.hpp"
#include "pgn/trajectories.hpp"

namespace pgn {

enum class Family { golden, zero, algebraic, random_digits };

const char* to_string(Family family);
Family parse_family(const std::string& name);

struct InstanceSpec {
  Family family = Family::random_digits;
  int m = 1;
  int n = 1;
  int count = 1;
};

struct Instance {
  std::string label;        // e.g. "random-digits 1x2 #0"
  std::string class_label;  // e.g. "random-digits 1x2"
  Family family = Family::random_digits;
  Problem problem;
};

/// Deterministic given (seed, specs, digits).
class ProblemGenerator {
 public:
  ProblemGenerator(std::uint64_t seed, std::vector<InstanceSpec> specs, int digits = 80);

  /// golden (1,1), 2 random (1,2), 2 random (2,1), 2 random (2,2).
  static ProblemGenerator default_suite(std::uint64_t seed = 1, int digits = 80);

  std::vector<Instance> generate() const;
  std::uint64_t seed() const { return seed_; }
  int digits() const { return digits_; }
  const std::vector<InstanceSpec>& specs() const { return specs_; }

 private:
  std::uint64_t seed_;
  std::vector<InstanceSpec> specs_;
  int digits_;
};

/// Truncation of (sqrt(5) - 1) / 2 to `digits` decimals.
Rational golden_truncation(int digits);

enum class CheckStatus { pass, fail, degenerate_skipped };
const char* to_string(CheckStatus status);

struct CheckResult {
  std::string id;
  std::string instance_class;
  std::size_t instances = 0;  // evaluated
  std::size_t skipped = 0;    // degenerate or out of budget
  double worst_margin = 0.0;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::degenerate_skipped;
  std::string detail;  // worst instance, or skip reasons
};

struct Tolerances {
  double exponent = 0.1;    // exponent-level identities and inequalities
  double asymptotic = 2.0;  // multiplier of the O(1/s) scale
  double compound = 0.1;    // |psi_hat_1 - Psi_p| for s >= compound_from
  /// Per-check override by id.
  std::map<std::string, double> overrides;

  double for_check(const std::string& id, double fallback) const;
};

struct SuiteOptions {
  double horizon = 25.0;
  std::size_t samples = 40;
  unsigned base = 2;
  double window = 0.5;
  double compound_from = 20.0;
  unsigned threads = 0;
  std::uint64_t budget = 10'000'000;
  Tolerances tolerances;
};

/// Stable ids in report order.
const std::vector<std::string>& check_ids();
/// True for checks that must pass with tolerance 0.
bool is_exact_check(const std::string& id);

std::vector<CheckResult> run_suite(const ProblemGenerator& generator, const SuiteOptions& options);

/// Trajectory estimates of beta_1, alpha_1, b_p, a_p against staircases on
/// matched horizons (d <= 3).
CheckResult cross_pipeline_check(const Problem& problem, int p, const SuiteOptions& options);
/// b_p, a_p of Theta against b_{d-p}, a_{d-p} of Theta^t traced to (m/n) s_max.
CheckResult transposition_check(const Problem& problem, int p, const SuiteOptions& options);

/// Any failure among evaluated instances.
bool any_failure(const std::vector<CheckResult>& results);

}  // namespace pgn
