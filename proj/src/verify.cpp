// SPDX-License-Identifier: Apache-2.0

#include "pgn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "pgn/direct.hpp"
#include "pgn/exterior.hpp"

namespace pgn {

const char* to_string(Family family) {
  switch (family) {
    case Family::golden:
      return "golden";
    case Family::zero:
      return "zero";
    case Family::algebraic:
      return "rational-truncated-algebraic";
    case Family::random_digits:
      return "random-digits";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::golden, Family::zero, Family::algebraic, Family::random_digits})
    if (name == to_string(f)) return f;
  if (name == "algebraic") return Family::algebraic;
  if (name == "random") return Family::random_digits;
  throw InputError("unknown problem family '" + name + "'");
}

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::degenerate_skipped:
      return "degenerate-skipped";
  }
  return "?";
}

double Tolerances::for_check(const std::string& id, double fallback) const {
  auto it = overrides.find(id);
  return it == overrides.end() ? fallback : it->second;
}

// ---------------------------------------------------------------------------
// Problem generation

namespace {

Integer ten_power(int digits) {
  Integer out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return out;
}

// floor(k^{a/3} 10^digits) / 10^digits
Rational cube_root_power(long k, int a, int digits) {
  const Integer scale = ten_power(digits);
  Integer radicand = scale * scale * scale;
  for (int i = 0; i < a; ++i) radicand *= k;
  Integer root;
  mpz_root(root.get_mpz_t(), radicand.get_mpz_t(), 3);
  return make_rational(root, scale);
}

Rational random_digits(std::mt19937_64& rng, int digits) {
  Integer num = 0;
  for (int i = 0; i < digits; ++i) num = num * 10 + static_cast<long>(rng() % 10);
  return make_rational(num, ten_power(digits));
}

bool is_cube(long k) {
  const long r = std::lround(std::cbrt(static_cast<double>(k)));
  return r * r * r == k;
}

}  // namespace

Rational golden_truncation(int digits) {
  const Integer scale = ten_power(digits);
  Integer five = 5 * scale * scale, root;
  mpz_sqrt(root.get_mpz_t(), five.get_mpz_t());
  return make_rational((root - scale) / 2, scale);
}

ProblemGenerator::ProblemGenerator(std::uint64_t seed, std::vector<InstanceSpec> specs, int digits)
    : seed_(seed), specs_(std::move(specs)), digits_(digits) {
  if (digits_ < 1) throw InputError("generator: digits must be positive");
  for (const auto& s : specs_) {
    if (s.m < 1 || s.n < 1 || s.m + s.n > 8) throw InputError("generator: need m, n >= 1 and m + n <= 8");
    if (s.count < 0) throw InputError("generator: negative instance count");
    if (s.family == Family::golden && (s.m != 1 || s.n != 1)) throw InputError("generator: golden family is 1x1");
  }
}

ProblemGenerator ProblemGenerator::default_suite(std::uint64_t seed, int digits) {
  return ProblemGenerator(seed,
                          {{Family::golden, 1, 1, 1},
                           {Family::random_digits, 1, 2, 2},
                           {Family::random_digits, 2, 1, 2},
                           {Family::random_digits, 2, 2, 2}},
                          digits);
}

std::vector<Instance> ProblemGenerator::generate() const {
  std::vector<Instance> out;
  for (std::size_t si = 0; si < specs_.size(); ++si) {
    const InstanceSpec& spec = specs_[si];
    for (int k = 0; k < spec.count; ++k) {
      // one stream per instance, independent of the other specs
      std::seed_seq seq{seed_, static_cast<std::uint64_t>(si), static_cast<std::uint64_t>(k)};
      std::mt19937_64 rng(seq);
      RationalMatrix theta(spec.n, spec.m, Rational(0));
      switch (spec.family) {
        case Family::golden:
          theta(0, 0) = golden_truncation(digits_);
          break;
        case Family::zero:
          break;
        case Family::algebraic: {
          // k^{1/3}, k^{2/3}, ... for a random non-cube k: 1, k^{1/3}, k^{2/3}
          // are linearly independent over Q
          long base = 0;
          do base = 2 + static_cast<long>(rng() % 60);
          while (is_cube(base));
          int a = 1;
          for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.m; ++j) {
              theta(i, j) = cube_root_power(base + (a > 2 ? a : 0), a > 2 ? 1 : a, digits_);
              a = a % 4 + 1;
            }
          break;
        }
        case Family::random_digits:
          for (int i = 0; i < spec.n; ++i)
            for (int j = 0; j < spec.m; ++j) theta(i, j) = random_digits(rng, digits_);
          break;
      }
      Instance inst;
      std::ostringstream cls;
      cls << to_string(spec.family) << ' ' << spec.m << 'x' << spec.n;
      inst.class_label = cls.str();
      inst.label = inst.class_label + " #" + std::to_string(k);
      inst.family = spec.family;
      inst.problem = build_problem(spec.m, spec.n, theta, spec.family == Family::zero ? 0 : digits_);
      out.push_back(std::move(inst));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = {
      "minkowski-trajectory", "psi-ordering",       "Psi-chain",           "Psi-ends",
      "Psi-psi",              "compound-trace",   "cross-pipeline",      "starred-psi",
      "Psi-star",             "starred-beta-psi",             "alpha-beta-star",              "transposition",
      "split-regular",               "split-uniform",             "classical",           "duality-product",
      "hodge-involution",     "compound-multiplicativity", "system-equivalence", "hodge-transfer",
      "p1-agreement"};
  return ids;
}

bool is_exact_check(const std::string& id) {
  static const std::vector<std::string> exact = {"minkowski-trajectory", "psi-ordering",        "duality-product",
                                                 "hodge-involution",     "compound-multiplicativity",
                                                 "system-equivalence",  "hodge-transfer",      "p1-agreement"};
  return std::find(exact.begin(), exact.end(), id) != exact.end();
}

namespace {

constexpr double kInfiniteMismatch = -1e9;

enum class Scale { exact, asymptotic, exponent, compound };

Scale scale_of(const std::string& id) {
  if (is_exact_check(id)) return Scale::exact;
  if (id == "Psi-chain" || id == "Psi-ends" || id == "Psi-psi" || id == "starred-psi" || id == "Psi-star")
    return Scale::asymptotic;
  if (id == "compound-trace") return Scale::compound;
  return Scale::exponent;
}

double default_tolerance(const std::string& id, const Tolerances& tol) {
  switch (scale_of(id)) {
    case Scale::exact:
      return tol.for_check(id, 0.0);
    case Scale::asymptotic:
      return tol.for_check(id, tol.asymptotic);
    case Scale::compound:
      return tol.for_check(id, tol.compound);
    case Scale::exponent:
      return tol.for_check(id, tol.exponent);
  }
  return 0.0;
}

// Worst margin of one check on one instance, or the reason it was skipped.
struct Outcome {
  std::optional<double> margin;
  std::string reason;

  static Outcome skip(std::string why) { return {std::nullopt, std::move(why)}; }
  static Outcome of(double m) { return {m, {}}; }
};

// Running minimum that stays "empty" until the first value.
struct Worst {
  double value = std::numeric_limits<double>::infinity();
  bool any = false;
  std::string skipped;

  void add(double v) {
    value = std::min(value, v + 0.0);  // no negative zero
    any = true;
  }
  // |a - b| as a negative margin, with infinite flags compared as flags.
  void add_diff(const Exponent& a, const Exponent& b) {
    if (a.infinite || b.infinite)
      add(a.infinite == b.infinite ? 0.0 : kInfiniteMismatch);
    else
      add(-std::fabs(a.value - b.value));
  }
  Outcome outcome(const std::string& empty_reason) const {
    if (!any) return Outcome::skip(skipped.empty() ? empty_reason : skipped);
    return Outcome::of(value);
  }
};

double ln_factorial(int d) {
  double f = 0;
  for (int i = 2; i <= d; ++i) f += std::log(static_cast<double>(i));
  return f;
}

Rational factorial(int d) {
  Rational f(1);
  for (int i = 2; i <= d; ++i) f *= i;
  return f;
}

double ln_of(const Rational& q) { return log(HiFloat(q)).to_double(); }

struct Prepared {
  const Instance* instance = nullptr;
  std::string degenerate;  // non-empty: asymptotic checks are skipped
  std::string error;       // non-empty: traces failed
  std::vector<TrajectorySample> standard, starred;
  std::vector<std::vector<TrajectorySample>> hat;  // index p - 1, p >= 2
  std::optional<ExponentReport> report;
  // psi_hat_1 ranges of the grade-p compounds of Theta and Theta^t, index p - 1
  std::vector<Range> hat_psi, transposed_hat_psi;
};

TraceOptions trace_options(const SuiteOptions& o) {
  TraceOptions t;
  t.threads = o.threads;
  t.budget = o.budget;
  return t;
}

GridSpec grid_spec(const SuiteOptions& o, double horizon) { return GridSpec{horizon, o.samples, o.base}; }

Range hat_range(const std::vector<TrajectorySample>& hat, const SchmidtEstimate& est, int p, double window) {
  return p == 1 ? est.psi[0] : estimate_schmidt(hat, window).psi[0];
}

// psi_hat_1 ranges for grades 1..d-1 on the standard path traced to `horizon`.
std::vector<Range> hat_ranges(const Problem& pr, double horizon, const SuiteOptions& options,
                              std::vector<std::vector<TrajectorySample>>* keep = nullptr) {
  const TraceOptions to = trace_options(options);
  const auto grid = make_grid(path(pr, PathKind::standard), grid_spec(options, horizon));
  const SchmidtEstimate est = estimate_schmidt(trace(pr, PathKind::standard, grid, to), options.window);
  std::vector<Range> out;
  if (keep) keep->assign(static_cast<std::size_t>(pr.d()), {});
  for (int p = 1; p < pr.d(); ++p) {
    std::vector<TrajectorySample> hat;
    if (p > 1) hat = trace_hat(pr, p, grid, to);
    out.push_back(hat_range(hat, est, p, options.window));
    if (keep) (*keep)[static_cast<std::size_t>(p - 1)] = std::move(hat);
  }
  return out;
}

Prepared prepare(const Instance& inst, const SuiteOptions& options) {
  Prepared prep;
  prep.instance = &inst;
  const Problem& pr = inst.problem;
  const double budget = horizon_budget(pr);
  if (budget == 0.0)
    prep.degenerate = "Theta is integral";
  else if (options.horizon > budget) {
    std::ostringstream msg;
    msg << "horizon " << options.horizon << " exceeds the precision horizon " << budget;
    prep.degenerate = msg.str();
  }
  try {
    const TraceOptions to = trace_options(options);
    const GridSpec g = grid_spec(options, options.horizon);
    prep.standard = trace(pr, PathKind::standard, make_grid(path(pr, PathKind::standard), g), to);
    const GridSpec gs = grid_spec(options, matched_starred_horizon(pr, options.horizon));
    prep.starred = trace(pr, PathKind::starred, make_grid(path(pr, PathKind::starred), gs), to);
  } catch (const BudgetExceeded& e) {
    prep.error = std::string("budget: ") + e.what();
    if (!prep.degenerate.empty()) prep.error = prep.degenerate + "; " + prep.error;
    return prep;
  }
  // estimates only feed the asymptotic checks
  try {
    const TraceOptions to = trace_options(options);
    const GridSpec g = grid_spec(options, options.horizon);
    const GridSpec gs = grid_spec(options, matched_starred_horizon(pr, options.horizon));
    prep.report = exponent_report(pr, prep.standard, prep.starred, g, options.window);
    if (prep.degenerate.empty()) {
      const auto grid = make_grid(path(pr, PathKind::standard), g);
      prep.hat.assign(static_cast<std::size_t>(pr.d()), {});
      for (int p = 1; p < pr.d(); ++p) {
        if (p > 1) prep.hat[static_cast<std::size_t>(p - 1)] = trace_hat(pr, p, grid, to);
        prep.hat_psi.push_back(
            hat_range(prep.hat[static_cast<std::size_t>(p - 1)], prep.report->standard, p, options.window));
      }
      prep.transposed_hat_psi = hat_ranges(transposed(pr), gs.horizon, options);
    }
  } catch (const BudgetExceeded& e) {
    if (prep.degenerate.empty()) prep.degenerate = std::string("budget: ") + e.what();
  } catch (const InsufficientSamples& e) {
    if (prep.degenerate.empty()) prep.degenerate = std::string("samples: ") + e.what();
  }
  return prep;
}

// -- exact trajectory checks -------------------------------------------------

Outcome minkowski(const Prepared& prep) {
  if (!prep.error.empty()) return Outcome::skip(prep.error);
  const int d = prep.instance->problem.d();
  const Rational fact = factorial(d);
  const double lnf = ln_factorial(d);
  Worst w;
  for (const auto* samples : {&prep.standard, &prep.starred}) {
    for (const auto& smp : *samples) {
      double margin;
      if (smp.exact_lambdas) {
        Rational prod(1);
        for (const auto& l : *smp.exact_lambdas) prod *= l;
        const double lp = ln_of(prod);
        margin = std::min(lp + lnf, -lp) / smp.s();
        if (prod > 1 || prod * fact < 1) margin = std::min(margin, -std::numeric_limits<double>::min());
      } else {
        const double sum = smp.Psi.back().to_double();
        margin = std::min(-sum, lnf / smp.s() + sum);
      }
      w.add(margin);
    }
  }
  return w.outcome("no samples");
}

Outcome psi_ordering(const Prepared& prep) {
  if (!prep.error.empty()) return Outcome::skip(prep.error);
  Worst w;
  for (const auto* samples : {&prep.standard, &prep.starred}) {
    for (const auto& smp : *samples) {
      for (std::size_t i = 1; i < smp.psi.size(); ++i) {
        double gap = (smp.psi[i] - smp.psi[i - 1]).to_double();
        if (smp.exact_lambdas) {
          const Rational& a = (*smp.exact_lambdas)[i - 1];
          const Rational& b = (*smp.exact_lambdas)[i];
          if (a == b) gap = 0.0;
          if (a > b) gap = std::min(gap, -std::numeric_limits<double>::min());
          if (a < b) gap = std::max(gap, 0.0);
        }
        w.add(gap);
      }
    }
  }
  return w.outcome("no samples");
}

// -- asymptotic checks at the estimate level ----------------------------------

std::string asymptotic_gate(const Prepared& prep) {
  if (!prep.error.empty()) return prep.error;
  if (!prep.degenerate.empty()) return prep.degenerate;
  return {};
}

Outcome psi_chain(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const int d = prep.instance->problem.d();
  const auto& est = prep.report->standard;
  const double unit = ln_factorial(d) / est.s_low;
  Worst w;
  for (int p = 1; p <= d - 2; ++p) {
    const auto& a = est.Psi[static_cast<std::size_t>(p - 1)];
    const auto& b = est.Psi[static_cast<std::size_t>(p)];
    w.add((a.low / (d - p) - b.low / (d - p - 1)) / unit);
    w.add((a.high / (d - p) - b.high / (d - p - 1)) / unit);
  }
  return w.outcome("d = 2 has no intermediate grade");
}

Outcome psi_ends(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const int d = prep.instance->problem.d();
  const auto& est = prep.report->standard;
  const double unit = ln_factorial(d) / est.s_low;
  const auto& one = est.Psi[0];
  const auto& last = est.Psi[static_cast<std::size_t>(d - 2)];
  Worst w;
  w.add((one.low - (d - 1) * last.low) / unit);
  w.add((one.high - (d - 1) * last.high) / unit);
  return w.outcome("");
}

Outcome psi_psi(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const int d = prep.instance->problem.d();
  const auto& est = prep.report->standard;
  const double unit = ln_factorial(d) / est.s_low;
  const auto& Psi = est.Psi[static_cast<std::size_t>(d - 2)];
  const auto& psi = est.psi[static_cast<std::size_t>(d - 1)];
  Worst w;
  w.add(-std::fabs(Psi.low + psi.high) / unit);
  w.add(-std::fabs(Psi.high + psi.low) / unit);
  return w.outcome("");
}

Outcome starred_psi(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  const int d = pr.d();
  const double nm = static_cast<double>(pr.n) / pr.m;
  const auto& est = prep.report->standard;
  const auto& star = prep.report->starred;
  const double unit = nm * ln_factorial(d) / est.s_low;
  Worst w;
  for (int p = 1; p <= d; ++p) {
    const auto& s = star.psi[static_cast<std::size_t>(p - 1)];
    const auto& q = est.psi[static_cast<std::size_t>(d - p)];
    w.add(-std::fabs(s.low + nm * q.high) / unit);
    w.add(-std::fabs(s.high + nm * q.low) / unit);
  }
  return w.outcome("");
}

Outcome psi_star(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  const int d = pr.d();
  const double nm = static_cast<double>(pr.n) / pr.m;
  const auto& est = prep.report->standard;
  const auto& star = prep.report->starred;
  Worst w;
  for (int p = 1; p < d; ++p) {
    const double unit = nm * 0.5 * (p + 1) * ln_factorial(d) / est.s_low;
    const auto& s = star.Psi[static_cast<std::size_t>(p - 1)];
    const auto& q = est.Psi[static_cast<std::size_t>(d - p - 1)];
    w.add(-std::fabs(s.low - nm * q.low) / unit);
    w.add(-std::fabs(s.high - nm * q.high) / unit);
  }
  return w.outcome("");
}

Outcome compound_trace(const Prepared& prep, const SuiteOptions& options) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const int d = prep.instance->problem.d();
  Worst w;
  for (int p = 2; p < d; ++p) {
    const auto& hat = prep.hat[static_cast<std::size_t>(p - 1)];
    for (std::size_t k = 0; k < hat.size(); ++k) {
      if (prep.standard[k].s() < options.compound_from) continue;
      const double diff = hat[k].psi[0].to_double() - prep.standard[k].Psi[static_cast<std::size_t>(p - 1)].to_double();
      w.add(-std::fabs(diff));
    }
  }
  return w.outcome(d < 3 ? "d = 2 has no compound grade beyond 1" : "no samples past the compound threshold");
}

// -- exponent-level checks ------------------------------------------------------

Outcome starred_beta_psi(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  const int m = pr.m, n = pr.n, d = pr.d();
  const auto& est = prep.report->standard;
  const auto& star = prep.report->starred;
  Worst w;
  for (int p = 1; p <= d; ++p) {
    const ExponentPair got = first_type_exponents(star.psi[static_cast<std::size_t>(p - 1)], n, m);
    const Range& q = est.psi[static_cast<std::size_t>(d - p)];
    // (1 + beta*_p)(m - n psiHigh_{d+1-p}) = (1 + alpha*_p)(m - n psiLow_{d+1-p}) = d
    auto predict = [&](double den) {
      return den <= kDegenerateEps ? Exponent{std::numeric_limits<double>::infinity(), true}
                                   : Exponent{d / den - 1.0, false};
    };
    w.add_diff(got.regular, predict(m - n * q.high));
    w.add_diff(got.uniform, predict(m - n * q.low));
  }
  return w.outcome("");
}

Outcome alpha_beta_star(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  const int m = pr.m, n = pr.n, d = pr.d();
  const auto& est = prep.report->standard;
  const auto& star = prep.report->starred;
  Worst w;
  for (int p = 1; p <= d; ++p) {
    const ExponentPair plain_p = first_type_exponents(est.psi[static_cast<std::size_t>(p - 1)], m, n);
    const ExponentPair star_p = first_type_exponents(star.psi[static_cast<std::size_t>(p - 1)], n, m);
    const ExponentPair plain_q = first_type_exponents(est.psi[static_cast<std::size_t>(d - p)], m, n);
    const ExponentPair star_q = first_type_exponents(star.psi[static_cast<std::size_t>(d - p)], n, m);
    // alpha_{d+1-p} beta*_p = 1 and alpha*_{d+1-p} beta_p = 1
    for (auto [a, b] : {std::pair{plain_q.uniform, star_p.regular}, std::pair{star_q.uniform, plain_p.regular}}) {
      if (a.infinite || b.infinite) {
        w.skipped = "infinite exponents";
        continue;
      }
      w.add(-std::fabs(a.value * b.value - 1.0));
    }
  }
  return w.outcome("");
}

std::optional<ExponentPair> second_type(const SchmidtEstimate& est, int m, int n, int p) {
  return second_type_exponents(est.Psi[static_cast<std::size_t>(p - 1)], m, n, p);
}

// b_p from psi_hat_1 of the grade-p compound of Theta against b_{d-p} of Theta^t.
Outcome transposition_outcome(const Problem& pr, const std::vector<Range>& hat, const std::vector<Range>& transposed_hat,
                              int p_from, int p_to) {
  const int m = pr.m, n = pr.n, d = pr.d();
  Worst w;
  for (int p = p_from; p <= p_to; ++p) {
    const ExponentPair a = second_type_exponents(hat[static_cast<std::size_t>(p - 1)], m, n, p);
    const ExponentPair b = second_type_exponents(transposed_hat[static_cast<std::size_t>(d - p - 1)], n, m, d - p);
    w.add_diff(a.regular, b.regular);
    w.add_diff(a.uniform, b.uniform);
  }
  return w.outcome("");
}

Outcome transposition(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  return transposition_outcome(pr, prep.hat_psi, prep.transposed_hat_psi, 1, pr.d() - 1);
}

// The regular and uniform splits share their shape.
Outcome inter_transference(const Prepared& prep, bool uniform) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  const int m = pr.m, n = pr.n, d = pr.d();
  Worst w;
  for (int p = 1; p <= d - 2; ++p) {
    const ExponentPair a = *second_type(prep.report->standard, m, n, p);
    const ExponentPair b = *second_type(prep.report->standard, m, n, p + 1);
    const Exponent& bp = uniform ? a.uniform : a.regular;
    const Exponent& bq = uniform ? b.uniform : b.regular;
    if (bp.infinite || bq.infinite) {
      w.skipped = "infinite exponents";
      continue;
    }
    if (p >= m)
      w.add((d - p - 1) * (1 + bq.value) - (d - p) * (1 + bp.value));
    else
      w.add((d - p - 1) / (1 + bp.value) - (d - p) / (1 + bq.value) + n);
  }
  return w.outcome("d = 2 has no intermediate grade");
}

Outcome classical(const Prepared& prep) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  const int m = pr.m, n = pr.n, d = pr.d();
  const auto& est = prep.report->standard;
  const ExponentPair b1 = *second_type(est, m, n, 1);
  const ExponentPair b1s = second_type_exponents(prep.report->starred.Psi[0], n, m, 1);
  Worst w;
  auto finite = [&](std::initializer_list<Exponent> es) {
    for (const auto& e : es)
      if (e.infinite) {
        w.skipped = "infinite exponents";
        return false;
      }
    return true;
  };
  // Dyson: b*_1 >= (n b_1 + n - 1) / ((m - 1) b_1 + m); Apfelbeck for a
  if (finite({b1.regular, b1s.regular}))
    w.add(b1s.regular.value - (n * b1.regular.value + n - 1) / ((m - 1) * b1.regular.value + m));
  if (finite({b1.uniform, b1s.uniform}))
    w.add(b1s.uniform.value - (n * b1.uniform.value + n - 1) / ((m - 1) * b1.uniform.value + m));
  if (m == 1) {
    // Khintchine's second inequality
    if (finite({b1.regular, b1s.regular}))
      w.add(b1.regular.value - b1s.regular.value / ((n - 1) * b1s.regular.value + n));
    // the split chain for p = 1..n-1
    for (int p = 1; p <= n - 1 && p + 1 < d; ++p) {
      const Exponent bp = second_type(est, m, n, p)->regular;
      const Exponent bq = second_type(est, m, n, p + 1)->regular;
      if (!finite({bp, bq})) continue;
      w.add(bq.value - ((n - p + 1) * bp.value + 1) / (n - p));
      w.add(bp.value - p * bq.value / (bq.value + p + 1));
    }
  }
  return w.outcome("");
}

// -- cross-pipeline -------------------------------------------------------------

Exponent staircase_side(const Problem& pr, int p, StaircaseKind kind, const Exponent& traj, bool uniform,
                        const SuiteOptions& options) {
  // s = n (1 + gamma) ln t / d along the threshold, so the trajectory horizon
  // maps to ln t_max = d s_max / (n (1 + gamma)).
  const double horizon = traj.infinite ? options.horizon
                                       : pr.d() * options.horizon / (pr.n * (1.0 + traj.value));
  const auto grid = make_grid(path(pr, PathKind::standard), grid_spec(options, horizon));
  StaircaseOptions so;
  so.oracle.budget = options.budget;
  const auto points = staircase_exponent(pr, p, staircase_ts(grid), kind, so, options.threads);
  const ExponentPair est = staircase_estimate(points, options.window);
  return uniform ? est.uniform : est.regular;
}

Outcome cross_pipeline(const Problem& pr, int p, const SchmidtEstimate& est, const Range& hat,
                       const SuiteOptions& options) {
  if (pr.d() > 3) return Outcome::skip("d > 3");
  const int m = pr.m, n = pr.n;
  Worst w;
  try {
    if (p == 1) {
      const ExponentPair first = first_type_exponents(est.psi[0], m, n);
      w.add_diff(first.regular, staircase_side(pr, 1, StaircaseKind::first_type, first.regular, false, options));
      w.add_diff(first.uniform, staircase_side(pr, 1, StaircaseKind::first_type, first.uniform, true, options));
    }
    // second type from psi_hat_1 of the compound lattice
    const ExponentPair second = second_type_exponents(hat, m, n, p);
    w.add_diff(second.regular, staircase_side(pr, p, StaircaseKind::second_type, second.regular, false, options));
    w.add_diff(second.uniform, staircase_side(pr, p, StaircaseKind::second_type, second.uniform, true, options));
  } catch (const InsufficientSamples& e) {
    return Outcome::skip(std::string("staircase: ") + e.what());
  } catch (const BudgetExceeded& e) {
    return Outcome::skip(std::string("budget: ") + e.what());
  }
  return w.outcome("");
}

Outcome cross_pipeline_all(const Prepared& prep, const SuiteOptions& options) {
  if (auto why = asymptotic_gate(prep); !why.empty()) return Outcome::skip(why);
  const Problem& pr = prep.instance->problem;
  if (pr.d() > 3) return Outcome::skip("d > 3");
  Worst w;
  for (int p = 1; p < pr.d(); ++p) {
    const Outcome o = cross_pipeline(pr, p, prep.report->standard, prep.hat_psi[static_cast<std::size_t>(p - 1)], options);
    if (o.margin)
      w.add(*o.margin);
    else
      w.skipped = o.reason;
  }
  return w.outcome("");
}

// -- exact algebraic and oracle checks --------------------------------------------

Outcome duality_product(const Prepared& prep, const SuiteOptions& options) {
  const Problem& pr = prep.instance->problem;
  const int d = pr.d();
  const Rational fact = factorial(d);
  const double lnf = ln_factorial(d);
  const LatticeBasis lam = lattice(pr), dual = dual_lattice(pr);
  MinimaOptions mo;
  mo.budget = options.budget;
  Worst w;
  try {
    const auto grid = make_grid(path(pr, PathKind::standard), GridSpec{8.0, 4, options.base});
    for (const Rational& t : staircase_ts(grid)) {
      for (const Rational& g : {Rational(0), make_rational(pr.m, pr.n), Rational(1), Rational(2)}) {
        const Box near = box_P(pr, g, t), far = box_P(pr, g, 1 / t);
        if (!near.is_exact() || !far.is_exact()) continue;
        const MinimaResult a = successive_minima(lam, near, mo);
        const MinimaResult b = successive_minima(dual, far, mo);
        for (int p = 1; p <= d; ++p) {
          const Rational prod = (*b.exact_lambdas)[static_cast<std::size_t>(p - 1)] *
                                (*a.exact_lambdas)[static_cast<std::size_t>(d - p)];
          const double lp = ln_of(prod);
          double margin = std::min(lp + lnf, lnf - lp);
          if (prod * fact < 1 || prod > fact) margin = std::min(margin, -std::numeric_limits<double>::min());
          w.add(margin);
        }
      }
    }
  } catch (const BudgetExceeded& e) {
    return Outcome::skip(std::string("budget: ") + e.what());
  }
  return w.outcome("no exact probes");
}

Outcome hodge_involution(const Prepared& prep) {
  const int d = prep.instance->problem.d();
  Worst w;
  for (int p = 0; p <= d; ++p) {
    const int sign = (p * (d - p)) % 2 == 0 ? 1 : -1;
    for (const auto& sigma : all_subsets(d, p)) {
      const Multivector e = Multivector::basis(d, sigma);
      const Multivector once = hodge_star(e);
      const bool ok = hodge_star(once) == Rational(sign) * e && sup_norm(once) == 1 &&
                      once.at(complement(sigma, d)) != 0;
      w.add(ok ? 0.0 : -1.0);
    }
  }
  return w.outcome("");
}

Outcome compound_multiplicativity(const Prepared& prep, std::uint64_t seed, std::size_t index) {
  const int d = prep.instance->problem.d();
  std::seed_seq seq{seed, static_cast<std::uint64_t>(index), std::uint64_t{0xc0}};
  std::mt19937_64 rng(seq);
  auto random_matrix = [&] {
    RationalMatrix a(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = static_cast<long>(rng() % 7) - 3;
    return a;
  };
  Worst w;
  for (int trial = 0; trial < 10; ++trial) {
    const RationalMatrix a = random_matrix(), b = random_matrix();
    const RationalMatrix ab = mat_mul(a, b);
    for (int p = 1; p <= d; ++p) w.add(compound_matrix(ab, p) == mat_mul(compound_matrix(a, p), compound_matrix(b, p)) ? 0.0 : -1.0);
  }
  return w.outcome("");
}

// Low-height rational stand-in for Theta, small enough for exhaustive search.
Problem small_proxy(const Problem& pr) {
  RationalMatrix th = pr.theta;
  for (std::size_t i = 0; i < th.rows(); ++i)
    for (std::size_t j = 0; j < th.cols(); ++j) {
      const Rational scaled = th(i, j) * 6;
      Integer k;
      mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      if (scaled - Rational(k) >= make_rational(1, 2)) k += 1;
      th(i, j) = make_rational(k, 6);
    }
  return build_problem(pr.m, pr.n, th);
}

long proxy_bound(std::size_t r) {
  long b = 1;
  while (std::pow(2.0 * (b + 1) + 1, static_cast<double>(r)) <= 20000.0) ++b;
  return b;
}

const std::vector<Rational>& proxy_gammas() {
  static const std::vector<Rational> g = {make_rational(-1, 2), Rational(0), make_rational(1, 2), Rational(1),
                                          Rational(2)};
  return g;
}

const std::vector<Rational>& proxy_ts() {
  static const std::vector<Rational> t = {Rational(1), Rational(2), Rational(3), make_rational(9, 2)};
  return t;
}

Outcome agreement(const AgreementReport& r) { return Outcome::of(r.mismatches ? -static_cast<double>(r.mismatches) : 0.0); }

Outcome system_equivalence(const Prepared& prep, const SuiteOptions& options) {
  const Problem proxy = small_proxy(prep.instance->problem);
  OracleOptions oo;
  oo.budget = options.budget;
  Worst w;
  try {
    for (int p = 1; p < proxy.d(); ++p) {
      const long bound = proxy_bound(binomial(proxy.d(), p));
      w.add(*agreement(equivalence_check(proxy, p, proxy_gammas(), proxy_ts(), bound, oo)).margin);
    }
  } catch (const BudgetExceeded& e) {
    return Outcome::skip(std::string("budget: ") + e.what());
  }
  return w.outcome("");
}

Outcome hodge_transfer(const Prepared& prep, const SuiteOptions& options) {
  const Problem proxy = small_proxy(prep.instance->problem);
  OracleOptions oo;
  oo.budget = options.budget;
  Worst w;
  try {
    for (int p = 1; p < proxy.d(); ++p) {
      const long bound = proxy_bound(binomial(proxy.d(), p));
      w.add(*agreement(hodge_transfer_check(proxy, p, proxy_gammas(), proxy_ts(), bound, oo)).margin);
    }
  } catch (const BudgetExceeded& e) {
    return Outcome::skip(std::string("budget: ") + e.what());
  }
  return w.outcome("");
}

Outcome p1_agreement(const Prepared& prep, const SuiteOptions& options) {
  const Problem proxy = small_proxy(prep.instance->problem);
  OracleOptions oo;
  oo.budget = options.budget;
  try {
    const std::vector<Rational> ts = {Rational(2), Rational(3), make_rational(9, 2)};
    return agreement(grade_one_check(proxy, proxy_gammas(), ts, oo));
  } catch (const BudgetExceeded& e) {
    return Outcome::skip(std::string("budget: ") + e.what());
  }
}

// -- aggregation ------------------------------------------------------------------

struct Tally {
  std::size_t instances = 0;
  std::size_t skipped = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string worst_label;
  std::vector<std::string> reasons;
};

CheckResult finish(const std::string& id, const std::string& cls, const Tally& t, double tolerance) {
  CheckResult r;
  r.id = id;
  r.instance_class = cls;
  r.instances = t.instances;
  r.skipped = t.skipped;
  r.tolerance = tolerance;
  if (t.instances == 0) {
    r.status = CheckStatus::degenerate_skipped;
    r.worst_margin = 0.0;
  } else {
    r.worst_margin = t.worst;
    r.status = t.worst >= -tolerance ? CheckStatus::pass : CheckStatus::fail;
  }
  std::ostringstream detail;
  if (t.instances > 0) detail << "worst: " << t.worst_label;
  for (const auto& reason : t.reasons) {
    if (detail.tellp() > 0) detail << "; ";
    detail << "skipped " << reason;
  }
  r.detail = detail.str();
  return r;
}

void record(Tally& t, const Outcome& o, const std::string& label) {
  if (o.margin) {
    ++t.instances;
    if (*o.margin < t.worst || t.worst_label.empty()) {
      t.worst = std::min(t.worst, *o.margin);
      t.worst_label = label;
    }
  } else {
    ++t.skipped;
    t.reasons.push_back(label + " (" + o.reason + ")");
  }
}

CheckResult single_result(const std::string& id, const Problem& pr, const Outcome& o, const SuiteOptions& options) {
  Tally t;
  std::ostringstream label;
  label << pr.m << 'x' << pr.n;
  record(t, o, label.str());
  return finish(id, label.str(), t, default_tolerance(id, options.tolerances));
}

}  // namespace

std::vector<CheckResult> run_suite(const ProblemGenerator& generator, const SuiteOptions& options) {
  const std::vector<Instance> instances = generator.generate();
  std::vector<std::string> classes;
  for (const auto& inst : instances)
    if (std::find(classes.begin(), classes.end(), inst.class_label) == classes.end()) classes.push_back(inst.class_label);
  const auto& ids = check_ids();
  // tallies[check][class]
  std::vector<std::vector<Tally>> tallies(ids.size(), std::vector<Tally>(classes.size()));

  for (std::size_t idx = 0; idx < instances.size(); ++idx) {
    const Instance& inst = instances[idx];
    const std::size_t cls = static_cast<std::size_t>(
        std::find(classes.begin(), classes.end(), inst.class_label) - classes.begin());
    const Prepared prep = prepare(inst, options);
    for (std::size_t c = 0; c < ids.size(); ++c) {
      const std::string& id = ids[c];
      Outcome o;
      if (id == "minkowski-trajectory") o = minkowski(prep);
      else if (id == "psi-ordering") o = psi_ordering(prep);
      else if (id == "Psi-chain") o = psi_chain(prep);
      else if (id == "Psi-ends") o = psi_ends(prep);
      else if (id == "Psi-psi") o = psi_psi(prep);
      else if (id == "compound-trace") o = compound_trace(prep, options);
      else if (id == "cross-pipeline") o = cross_pipeline_all(prep, options);
      else if (id == "starred-psi") o = starred_psi(prep);
      else if (id == "Psi-star") o = psi_star(prep);
      else if (id == "starred-beta-psi") o = starred_beta_psi(prep);
      else if (id == "alpha-beta-star") o = alpha_beta_star(prep);
      else if (id == "transposition") o = transposition(prep);
      else if (id == "split-regular") o = inter_transference(prep, false);
      else if (id == "split-uniform") o = inter_transference(prep, true);
      else if (id == "classical") o = classical(prep);
      else if (id == "duality-product") o = duality_product(prep, options);
      else if (id == "hodge-involution") o = hodge_involution(prep);
      else if (id == "compound-multiplicativity") o = compound_multiplicativity(prep, generator.seed(), idx);
      else if (id == "system-equivalence") o = system_equivalence(prep, options);
      else if (id == "hodge-transfer") o = hodge_transfer(prep, options);
      else if (id == "p1-agreement") o = p1_agreement(prep, options);
      record(tallies[c][cls], o, inst.label);
    }
  }

  std::vector<CheckResult> out;
  for (std::size_t c = 0; c < ids.size(); ++c)
    for (std::size_t k = 0; k < classes.size(); ++k)
      out.push_back(finish(ids[c], classes[k], tallies[c][k], default_tolerance(ids[c], options.tolerances)));
  return out;
}

CheckResult cross_pipeline_check(const Problem& problem, int p, const SuiteOptions& options) {
  if (p < 1 || p >= problem.d()) throw DimensionError("cross_pipeline_check: grade must lie in 1..d-1");
  const TraceOptions to = trace_options(options);
  const auto grid = make_grid(path(problem, PathKind::standard), grid_spec(options, options.horizon));
  Outcome o;
  try {
    const auto samples = trace(problem, PathKind::standard, grid, to);
    const SchmidtEstimate est = estimate_schmidt(samples, options.window);
    std::vector<TrajectorySample> hat;
    if (p > 1 && problem.d() <= 3) hat = trace_hat(problem, p, grid, to);
    o = cross_pipeline(problem, p, est, hat_range(hat, est, p, options.window), options);
  } catch (const BudgetExceeded& e) {
    o = Outcome::skip(std::string("budget: ") + e.what());
  }
  return single_result("cross-pipeline", problem, o, options);
}

CheckResult transposition_check(const Problem& problem, int p, const SuiteOptions& options) {
  if (p < 1 || p >= problem.d()) throw DimensionError("transposition_check: grade must lie in 1..d-1");
  Outcome o;
  try {
    const auto hat = hat_ranges(problem, options.horizon, options);
    const auto transposed_hat =
        hat_ranges(transposed(problem), matched_starred_horizon(problem, options.horizon), options);
    o = transposition_outcome(problem, hat, transposed_hat, p, p);
  } catch (const BudgetExceeded& e) {
    o = Outcome::skip(std::string("budget: ") + e.what());
  } catch (const InsufficientSamples& e) {
    o = Outcome::skip(std::string("samples: ") + e.what());
  }
  return single_result("transposition", problem, o, options);
}

bool any_failure(const std::vector<CheckResult>& results) {
  return std::any_of(results.begin(), results.end(), [](const CheckResult& r) { return r.status == CheckStatus::fail; });
}

}  // namespace pgn
