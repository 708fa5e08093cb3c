// SPDX-License-Identifier: Apache-2.0
//
// Acceptance criteria, one line each. Usage: acceptance <path to pgn>
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pgn/direct.hpp"
#include "pgn/exterior.hpp"
#include "pgn/minima.hpp"
#include "pgn/verify.hpp"

using namespace pgn;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream out;
  out.precision(prec);
  out << x;
  return out.str();
}

// Suite results for `id`, restricted to classes accepted by `keep`.
struct Slice {
  std::size_t classes = 0, instances = 0, skipped = 0, failed = 0;
  double worst = 1e300;
  std::string worst_class;
};

Slice slice(const std::vector<CheckResult>& rs, const std::string& id,
            const std::function<bool(const std::string&)>& keep = [](const std::string&) { return true; }) {
  Slice s;
  for (const auto& r : rs) {
    if (r.id != id || !keep(r.instance_class)) continue;
    ++s.classes;
    s.instances += r.instances;
    s.skipped += r.skipped;
    if (r.status == CheckStatus::fail) ++s.failed;
    if (r.instances > 0 && r.worst_margin < s.worst) {
      s.worst = r.worst_margin;
      s.worst_class = r.instance_class;
    }
  }
  return s;
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

bool dimension_in(const std::string& cls, std::initializer_list<int> ds) {
  const auto x = cls.rfind('x');
  const auto sp = cls.rfind(' ');
  const int m = std::stoi(cls.substr(sp + 1, x - sp - 1)), n = std::stoi(cls.substr(x + 1));
  for (int d : ds)
    if (m + n == d) return true;
  return false;
}

std::string describe(const Slice& s) {
  std::ostringstream out;
  out << s.instances << " instances in " << s.classes << " classes, worst margin " << fmt(s.worst);
  if (!s.worst_class.empty()) out << " (" << s.worst_class << ")";
  if (s.skipped) out << ", " << s.skipped << " skipped";
  return out.str();
}

// -- 1 ----------------------------------------------------------------------

Verdict minkowski(const std::vector<CheckResult>& rs, double suite_seconds) {
  const Slice s = slice(rs, "minkowski-trajectory");
  const Slice o = slice(rs, "psi-ordering");
  Verdict v;
  v.pass = s.failed == 0 && s.skipped == 0 && s.instances > 0 && suite_seconds <= 300.0;
  v.detail = describe(s) + "; ordering failures " + std::to_string(o.failed) + "; suite " + fmt(suite_seconds, 3) +
             " s (limit 300)";
  return v;
}

// -- 2 ----------------------------------------------------------------------

Verdict minima_vs_brute_force() {
  const auto start = Clock::now();
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<long> num(1, 9), den(1, 6);
  int compared = 0, mismatched = 0;
  for (int trial = 0; trial < 2000 && compared < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const RationalMatrix basis = oracle::random_unimodular(rng, n, 6, 2);
    RationalVector h(n);
    for (auto& x : h) x = make_rational(num(rng), den(rng));
    const oracle::BruteMinima brute = oracle::brute_force_minima(basis, h, n == 4 ? 7 : 24);
    if (brute.lambdas.empty()) continue;
    const MinimaResult r = successive_minima(LatticeBasis{basis, "random"}, make_box(h));
    bool same = r.exact_lambdas && *r.exact_lambdas == brute.lambdas;
    for (std::size_t k = 0; same && k < n; ++k) same = r.coefficients[k] == brute.coeffs[k];
    if (!same) ++mismatched;
    ++compared;
  }
  const double secs = seconds_since(start);
  Verdict v;
  v.pass = compared >= 100 && mismatched == 0 && secs <= 60.0;
  v.detail = std::to_string(compared) + " instances (d <= 4), " + std::to_string(mismatched) + " mismatches, " +
             fmt(secs, 3) + " s";
  return v;
}

// -- 3 ----------------------------------------------------------------------

Verdict equivalence(const std::vector<CheckResult>& rs) {
  auto d34 = [](const std::string& c) { return dimension_in(c, {3, 4}); };
  const Slice eq = slice(rs, "system-equivalence", d34);
  const Slice tr = slice(rs, "hodge-transfer", d34);
  const Slice one = slice(rs, "p1-agreement", d34);
  Verdict v;
  v.pass = eq.instances > 0 && eq.failed == 0 && eq.skipped == 0 && tr.failed == 0 && one.failed == 0;
  v.detail = "original vs modified: " + describe(eq) + "; Hodge transfer failures " + std::to_string(tr.failed) +
             "; grade one failures " + std::to_string(one.failed);
  return v;
}

// -- 4 ----------------------------------------------------------------------

Verdict hodge_and_compound() {
  std::size_t stars = 0, star_bad = 0;
  for (int d = 1; d <= 6; ++d)
    for (int p = 0; p <= d; ++p)
      for (const auto& sigma : all_subsets(d, p)) {
        const Multivector e = Multivector::basis(d, sigma);
        const Rational sign((p * (d - p)) % 2 == 0 ? 1 : -1);
        ++stars;
        if (!(hodge_star(hodge_star(e)) == sign * e)) ++star_bad;
      }
  std::mt19937_64 rng(99);
  std::size_t pairs = 0, products = 0, bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    const RationalMatrix a = oracle::random_integer_matrix(rng, d, -4, 4);
    const RationalMatrix b = oracle::random_integer_matrix(rng, d, -4, 4);
    const RationalMatrix ab = oracle::schoolbook(a, b);
    for (int p = 1; p <= static_cast<int>(d); ++p) {
      ++products;
      if (!(compound_matrix(ab, p) == oracle::schoolbook(compound_matrix(a, p), compound_matrix(b, p)))) ++bad;
    }
    ++pairs;
  }
  Verdict v;
  v.pass = star_bad == 0 && bad == 0;
  v.detail = "** on " + std::to_string(stars) + " basis elements (d <= 6): " + std::to_string(star_bad) +
             " wrong; (AB)^(p) on " + std::to_string(pairs) + " pairs (d <= 5), " + std::to_string(products) +
             " grades: " + std::to_string(bad) + " wrong";
  return v;
}

// -- 5 ----------------------------------------------------------------------

Verdict compound_trace(const std::vector<CheckResult>& rs) {
  const Slice s = slice(rs, "compound-trace", [](const std::string& c) { return dimension_in(c, {3}); });
  Verdict v;
  v.pass = s.instances > 0 && s.skipped == 0 && s.worst >= -0.1;
  v.detail = "max |psi_hat_1 - (psi_1 + psi_2)| over s >= 20 = " + fmt(0.0 - s.worst) + " (limit 0.1), " +
             std::to_string(s.instances) + " instances";
  return v;
}

// -- 6 ----------------------------------------------------------------------

Verdict golden() {
  const Problem pr = build_problem(1, 1, RationalMatrix(1, 1, golden_truncation(60)), 60);
  const GridSpec grid{30.0, 40, 2};
  const ExponentReport rep = exponent_report(pr, grid, 0.5);
  const ExponentPair first = rep.grades[0].first;
  SuiteOptions opts;
  opts.horizon = 30.0;
  const CheckResult agree = cross_pipeline_check(pr, 1, opts);
  // staircase side, for the record
  StaircaseOptions so;
  const auto pts = staircase_exponent(pr, 1, staircase_ts(make_grid(path(pr, PathKind::standard), grid)),
                                      StaircaseKind::first_type, so);
  const ExponentPair stair = staircase_estimate(pts, 0.5);
  auto inside = [](const Exponent& e) { return !e.infinite && e.value >= 0.95 && e.value <= 1.05; };
  Verdict v;
  v.pass = inside(first.regular) && inside(first.uniform) && agree.status == CheckStatus::pass;
  v.detail = "trajectory beta_1 = " + fmt(first.regular.value, 5) + ", alpha_1 = " + fmt(first.uniform.value, 5) +
             " (want [0.95, 1.05]); staircase beta_1 = " + fmt(stair.regular.value, 5) +
             ", alpha_1 = " + fmt(stair.uniform.value, 5) + "; pipelines differ by at most " +
             fmt(0.0 - agree.worst_margin) + " (limit 0.1)";
  return v;
}

// -- 7 ----------------------------------------------------------------------

// b_p from Psi_p (rather than the compound trace) on both sides; reported only.
double psi_route_gap(const Problem& pr) {
  const Problem tp = transposed(pr);
  const double h = 25.0, th = matched_starred_horizon(pr, h);
  const auto a = estimate_schmidt(trace(pr, PathKind::standard, make_grid(path(pr, PathKind::standard), {h, 40, 2})));
  const auto b = estimate_schmidt(trace(tp, PathKind::standard, make_grid(path(tp, PathKind::standard), {th, 40, 2})));
  double worst = 0.0;
  for (int p = 1; p < pr.d(); ++p) {
    const auto x = second_type_exponents(a.Psi[static_cast<std::size_t>(p - 1)], pr.m, pr.n, p);
    const auto y = second_type_exponents(b.Psi[static_cast<std::size_t>(pr.d() - p - 1)], pr.n, pr.m, pr.d() - p);
    if (x.regular.infinite || y.regular.infinite || x.uniform.infinite || y.uniform.infinite) continue;
    worst = std::max({worst, std::fabs(x.regular.value - y.regular.value), std::fabs(x.uniform.value - y.uniform.value)});
  }
  return worst;
}

Verdict transposition(const std::vector<CheckResult>& rs, const std::vector<Instance>& instances) {
  auto mixed = [](const std::string& c) { return ends_with(c, "1x2") || ends_with(c, "2x1") || ends_with(c, "2x2"); };
  const Slice s = slice(rs, "transposition", mixed);
  double psi_gap = 0.0;
  for (const auto& inst : instances)
    if (mixed(inst.class_label)) psi_gap = std::max(psi_gap, psi_route_gap(inst.problem));
  Verdict v;
  v.pass = s.instances > 0 && s.failed == 0 && s.skipped == 0 && s.worst >= -0.1;
  v.detail = "compound-trace estimates: max |b_p - b*_{d-p}| = " + fmt(0.0 - s.worst) + " over " +
             std::to_string(s.instances) + " instances (limit 0.1); via Psi_p instead: " + fmt(psi_gap) +
             " (informational)";
  return v;
}

// -- 8 ----------------------------------------------------------------------

Verdict transference(const std::vector<CheckResult>& rs) {
  const Slice chain = slice(rs, "Psi-chain");
  const Slice ends = slice(rs, "Psi-ends");
  const Slice t1 = slice(rs, "split-regular");
  const Slice t2 = slice(rs, "split-uniform");
  const Slice cl = slice(rs, "classical");
  Verdict v;
  v.pass = chain.failed + ends.failed + t1.failed + t2.failed + cl.failed == 0 && chain.instances > 0 &&
           t1.instances > 0 && t2.instances > 0;
  v.detail = "Psi chain worst " + fmt(chain.worst) + " and end form worst " + fmt(ends.worst) +
             " (units ln(d!)/s_window, limit -2); regular split worst " + fmt(t1.worst) + ", uniform split worst " +
             fmt(t2.worst) + ", classical worst " + fmt(cl.worst) + " (limit -0.1)";
  return v;
}

// -- 9 ----------------------------------------------------------------------

Verdict duality(const std::vector<CheckResult>& rs) {
  const Slice s = slice(rs, "duality-product");
  Verdict v;
  v.pass = s.instances > 0 && s.failed == 0 && s.skipped == 0;
  v.detail = "lambda*_p lambda_{d+1-p} in [1/d!, d!]: " + describe(s);
  return v;
}

// -- 10 ---------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Verdict determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no pgn binary given"};
  std::vector<std::string> reports;
  int codes[2] = {0, 0};
  for (int run = 0; run < 2; ++run) {
    const std::string out = "acceptance_verify_" + std::to_string(run) + ".json";
    const std::string cmd = "\"" + cli + "\" verify --seed 5 --out " + out + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    codes[run] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    reports.push_back(slurp(out));
  }
  Verdict v;
  v.pass = !reports[0].empty() && reports[0] == reports[1] && codes[0] == codes[1] && codes[0] >= 0 && codes[0] <= 1;
  v.detail = "two runs of 'pgn verify --seed 5': " + std::to_string(reports[0].size()) + " bytes, " +
             (reports[0] == reports[1] ? "identical" : "different") + ", exit " + std::to_string(codes[0]) + "/" +
             std::to_string(codes[1]);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const ProblemGenerator gen = ProblemGenerator::default_suite(1);
  const SuiteOptions opts;
  const auto start = Clock::now();
  const std::vector<CheckResult> rs = run_suite(gen, opts);
  const double suite_seconds = seconds_since(start);
  const auto instances = gen.generate();

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"Minkowski trajectory bound", [&] { return minkowski(rs, suite_seconds); }},
      {"successive minima vs brute force", [&] { return minima_vs_brute_force(); }},
      {"equivalence of the second-type systems", [&] { return equivalence(rs); }},
      {"Hodge star and compound algebra", [&] { return hodge_and_compound(); }},
      {"compound trace at finite s", [&] { return compound_trace(rs); }},
      {"golden-ratio calibration", [&] { return golden(); }},
      {"transposition identity", [&] { return transposition(rs, instances); }},
      {"transference chains", [&] { return transference(rs); }},
      {"duality product", [&] { return duality(rs); }},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed;
}
