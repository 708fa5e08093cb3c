// SPDX-License-Identifier: Apache-2.0
//
// pgn: traces, exponent reports, staircase oracles and the invariant suite.
//
// Exit codes: 0 ok, 1 check failure, 2 usage or input error, 3 budget or
// precision error.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgn/direct.hpp"
#include "pgn/io.hpp"
#include "pgn/trajectories.hpp"
#include "pgn/verify.hpp"

using namespace pgn;
using io::Json;

namespace {

enum Exit { ok = 0, check_failure = 1, usage_error = 2, budget_error = 3 };

struct Config {
  std::string problem_path;
  std::string path = "standard";
  unsigned grid_base = 2;
  std::size_t samples = 40;
  double horizon = 25.0;
  std::string mode = "exact";
  double window = 0.5;
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::uint64_t budget = 10'000'000;
  // verify
  int digits = 80;
  std::vector<std::string> tolerances;
  // oracle
  std::string kind = "first";
  int grade = 1;
  std::string engine = "minima";
  long bound = 0;
};

MinimaMode parse_mode(const std::string& mode) {
  return mode == "float" ? MinimaMode::certified_float : MinimaMode::exact;
}

Json grid_json(const Config& c) {
  return Json{{"base", c.grid_base}, {"samples", c.samples}, {"horizon", c.horizon}};
}

Json base_config(const std::string& command, const Config& c) {
  Json cfg;
  cfg["command"] = command;
  if (!c.problem_path.empty()) cfg["problem_file"] = c.problem_path;
  cfg["grid"] = grid_json(c);
  cfg["window"] = c.window;
  cfg["mode"] = c.mode;
  cfg["budget"] = c.budget;
  return cfg;
}

// Writes to --out, or stdout when empty.
void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw InputError("cannot write '" + c.out + "'");
  file << text;
}

TraceOptions trace_options(const Config& c) {
  TraceOptions t;
  t.mode = parse_mode(c.mode);
  t.threads = c.threads;
  t.budget = c.budget;
  return t;
}

void warn_horizon(const Problem& problem, double horizon, std::vector<std::string>& warnings) {
  const double budget = horizon_budget(problem);
  if (budget > 0.0 && horizon > budget) {
    std::ostringstream msg;
    msg << "horizon " << horizon << " exceeds the precision horizon " << budget << " of Theta";
    warnings.push_back(msg.str());
  }
}

int cmd_trace(const Config& c) {
  const Problem problem = io::read_problem(c.problem_path);
  const PathKind kind = parse_path_kind(c.path);
  const GridSpec spec{c.horizon, c.samples, c.grid_base};
  const auto samples = trace(problem, kind, make_grid(path(problem, kind), spec), trace_options(c));
  std::vector<std::string> warnings;
  warn_horizon(problem, kind == PathKind::starred ? c.horizon * problem.n / problem.m : c.horizon, warnings);
  Json cfg = base_config("trace", c);
  cfg["path"] = c.path;
  cfg["problem"] = io::to_json(problem);
  Json prov = io::provenance(cfg);
  prov["warnings"] = warnings;
  std::ostringstream text;
  io::write_trace_csv(text, samples, prov);
  emit(c, text.str());
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return ok;
}

int cmd_exponents(const Config& c) {
  const Problem problem = io::read_problem(c.problem_path);
  const GridSpec spec{c.horizon, c.samples, c.grid_base};
  const ExponentReport report = exponent_report(problem, spec, c.window, trace_options(c));
  Json cfg = base_config("exponents", c);
  cfg["problem"] = io::to_json(problem);
  Json doc = io::provenance(cfg);
  doc["report"] = io::to_json(report);
  emit(c, io::dump(doc));
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  return ok;
}

Tolerances parse_tolerances(const std::vector<std::string>& items) {
  Tolerances tol;
  const auto& ids = check_ids();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("--tolerance expects NAME=VALUE, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("--tolerance: malformed value in '" + item + "'");
    }
    if (value < 0.0) throw InputError("--tolerance: negative value in '" + item + "'");
    if (name == "exponent")
      tol.exponent = value;
    else if (name == "asymptotic")
      tol.asymptotic = value;
    else if (name == "compound")
      tol.compound = value;
    else if (std::find(ids.begin(), ids.end(), name) != ids.end())
      tol.overrides[name] = value;
    else
      throw InputError("--tolerance: unknown check or class '" + name + "'");
  }
  return tol;
}

int cmd_verify(const Config& c) {
  SuiteOptions opts;
  opts.horizon = c.horizon;
  opts.samples = c.samples;
  opts.base = c.grid_base;
  opts.window = c.window;
  opts.threads = c.threads;
  opts.budget = c.budget;
  opts.tolerances = parse_tolerances(c.tolerances);
  const auto gen = ProblemGenerator::default_suite(c.seed, c.digits);
  const auto results = run_suite(gen, opts);

  Json cfg = base_config("verify", c);
  cfg.erase("mode");
  cfg["seed"] = c.seed;
  cfg["digits"] = c.digits;
  Json suite = Json::array();
  for (const auto& s : gen.specs())
    suite.push_back({{"family", to_string(s.family)}, {"m", s.m}, {"n", s.n}, {"count", s.count}});
  cfg["suite"] = suite;
  cfg["tolerances"] = {{"exponent", opts.tolerances.exponent},
                       {"asymptotic", opts.tolerances.asymptotic},
                       {"compound", opts.tolerances.compound},
                       {"overrides", Json(opts.tolerances.overrides)}};
  Json doc = io::provenance(cfg);
  std::size_t pass = 0, fail = 0, skipped = 0;
  Json checks = Json::array();
  for (const auto& r : results) {
    checks.push_back(io::to_json(r));
    (r.status == CheckStatus::pass ? pass : r.status == CheckStatus::fail ? fail : skipped)++;
  }
  doc["summary"] = {{"results", results.size()}, {"pass", pass}, {"fail", fail}, {"degenerate_skipped", skipped}};
  doc["checks"] = checks;
  emit(c, io::dump(doc));
  std::cerr << "verify: " << pass << " pass, " << fail << " fail, " << skipped << " skipped\n";
  for (const auto& r : results)
    if (r.status == CheckStatus::fail)
      std::cerr << "  FAIL " << r.id << " [" << r.instance_class << "] margin " << r.worst_margin << " tolerance "
                << r.tolerance << '\n';
  return any_failure(results) ? check_failure : ok;
}

// A rational just below `gamma`, on a 1/1000 grid.
Rational below(double gamma, double slack) {
  return make_rational(static_cast<long>(std::floor((gamma - slack) * 1000.0)), 1000);
}

int cmd_oracle(const Config& c) {
  const Problem problem = io::read_problem(c.problem_path);
  if (c.grade < 1 || c.grade > problem.d()) throw InputError("--grade must lie in 1..d");
  const StaircaseKind kind = c.kind == "second" ? StaircaseKind::second_type : StaircaseKind::first_type;
  StaircaseOptions so;
  so.engine = c.engine == "oracle" ? FeasibilityEngine::oracle : FeasibilityEngine::minima;
  so.oracle.budget = c.budget;
  const auto grid = make_grid(path(problem, PathKind::standard), GridSpec{c.horizon, c.samples, c.grid_base});
  const auto ts = staircase_ts(grid);
  if (kind == StaircaseKind::second_type && c.bound > 0)
    for (const auto& t : ts)
      if (const long need = exhaustive_bound(problem, c.grade, t); need > c.bound)
        throw BudgetExceeded("--bound " + std::to_string(c.bound) + " is below the exhaustive bound " +
                             std::to_string(need) + " at t = " + to_string(t));
  const auto points = staircase_exponent(problem, c.grade, ts, kind, so, c.threads);
  const auto degenerate = std::count_if(points.begin(), points.end(), [](const StaircasePoint& p) { return p.degenerate; });
  if (degenerate > 0)
    throw BudgetExceeded("enumeration budget " + std::to_string(c.budget) + " exhausted at " +
                         std::to_string(degenerate) + " of " + std::to_string(points.size()) + " probes");

  OracleOptions oo;
  oo.budget = c.budget;
  Json probes = Json::array();
  std::vector<Rational> gammas;
  for (const auto& pt : points) {
    Json row = io::to_json(pt);
    if (!pt.infinite && !pt.degenerate && !pt.below_bracket) {
      const Rational g = below(pt.gamma, 2 * so.tolerance);
      gammas.push_back(g);
      std::optional<SolutionCertificate> cert;
      if (kind == StaircaseKind::first_type)
        cert = first_type_feasible(problem, c.grade, g, pt.t, oo);
      else
        cert = second_type_feasible(problem, c.grade, g, pt.t, CertificateKind::second_type_modified,
                                    c.bound > 0 ? c.bound : exhaustive_bound(problem, c.grade, pt.t), WedgeNorm::theta,
                                    oo);
      row["certificate"] = cert ? io::to_json(*cert) : Json(nullptr);
    }
    probes.push_back(row);
  }
  const ExponentPair est = staircase_estimate(points, c.window);

  Json cfg = base_config("oracle", c);
  cfg.erase("mode");
  cfg["problem"] = io::to_json(problem);
  cfg["kind"] = to_string(kind);
  cfg["grade"] = c.grade;
  cfg["engine"] = c.engine;
  cfg["bound"] = c.bound;
  Json doc = io::provenance(cfg);
  doc["estimate"] = kind == StaircaseKind::first_type ? io::to_json(est, "beta", "alpha") : io::to_json(est, "b", "a");
  doc["probes"] = probes;
  if (kind == StaircaseKind::second_type && c.grade < problem.d()) {
    // original and modified systems at each certified (gamma, t) and just
    // above it, where the exhaustive box stays small
    const std::size_t r = binomial(problem.d(), c.grade);
    Json variants = Json::array();
    std::size_t skipped = 0;
    for (std::size_t k = 0, g = 0; k < points.size(); ++k) {
      const auto& pt = points[k];
      if (pt.infinite || pt.degenerate || pt.below_bracket) continue;
      const Rational gamma = gammas[g++];
      const long bound = c.bound > 0 ? c.bound : exhaustive_bound(problem, c.grade, pt.t);
      if (std::pow(2.0 * bound + 1.0, static_cast<double>(r)) > 2e5) {
        ++skipped;
        continue;
      }
      const std::vector<Rational> gs = {gamma, gamma + make_rational(1, 4)};
      Json row = io::to_json(equivalence_check(problem, c.grade, gs, {pt.t}, bound, oo));
      row["t"] = to_string(pt.t);
      row["bound"] = bound;
      variants.push_back(row);
    }
    doc["variants"] = variants;
    doc["variants_skipped"] = skipped;
  }
  emit(c, io::dump(doc));
  return ok;
}

void add_grid(CLI::App* cmd, Config& c) {
  cmd->add_option("--grid-base", c.grid_base, "radix of the grid denominators")->check(CLI::Range(2u, 1000u));
  cmd->add_option("--samples", c.samples, "number of grid points")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  cmd->add_option("--horizon", c.horizon, "s_max")->check(CLI::PositiveNumber);
  cmd->add_option("--window", c.window, "tail fraction used by the estimates")->check(CLI::Range(0.01, 1.0));
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores");
  cmd->add_option("--budget", c.budget, "enumeration budget per search")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric geometry of numbers: trajectories, exponents and invariant checks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::tool_version()));
  Config c;

  auto* trace_cmd = app.add_subcommand("trace", "CSV of lambda, psi, Psi along a path");
  trace_cmd->add_option("--problem", c.problem_path, "problem file (JSON)")->required();
  trace_cmd->add_option("--path", c.path, "standard or starred")->check(CLI::IsMember({"standard", "starred"}));
  trace_cmd->add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  add_grid(trace_cmd, c);

  auto* exp_cmd = app.add_subcommand("exponents", "JSON exponent report for every grade, both orientations");
  exp_cmd->add_option("--problem", c.problem_path, "problem file (JSON)")->required();
  exp_cmd->add_option("--mode", c.mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  add_grid(exp_cmd, c);

  auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite and write a JSON verdict");
  verify_cmd->add_option("--seed", c.seed, "generator seed");
  verify_cmd->add_option("--digits", c.digits, "decimal digits of generated entries")->check(CLI::Range(10, 400));
  verify_cmd->add_option("--tolerance", c.tolerances,
                         "NAME=VALUE with NAME a check id or one of exponent, asymptotic, compound");
  add_grid(verify_cmd, c);

  auto* oracle_cmd = app.add_subcommand("oracle", "staircase thresholds and solution certificates");
  oracle_cmd->add_option("--problem", c.problem_path, "problem file (JSON)")->required();
  oracle_cmd->add_option("--kind", c.kind, "first or second")->check(CLI::IsMember({"first", "second"}));
  oracle_cmd->add_option("--grade", c.grade, "p");
  oracle_cmd->add_option("--engine", c.engine, "minima or oracle")->check(CLI::IsMember({"minima", "oracle"}));
  oracle_cmd->add_option("--bound", c.bound, "multivector search bound (default: exhaustive)");
  add_grid(oracle_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage_error;
  }

  try {
    if (*trace_cmd) return cmd_trace(c);
    if (*exp_cmd) return cmd_exponents(c);
    if (*verify_cmd) return cmd_verify(c);
    if (*oracle_cmd) return cmd_oracle(c);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return budget_error;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return budget_error;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage_error;
  }
  return usage_error;
}
