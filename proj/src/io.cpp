// SPDX-License-Identifier: Apache-2.0

#include "pgn/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace pgn::io {

const char* tool_name() { return "pgn"; }
const char* tool_version() { return PGN_VERSION; }

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw InputError("problem field '" + field + "': " + why);
}

int positive_int(const Json& doc, const char* key) {
  if (!doc.contains(key)) bad(key, "missing");
  const Json& v = doc.at(key);
  if (!v.is_number_integer()) bad(key, "expected an integer");
  const long long x = v.get<long long>();
  if (x < 1 || x > 64) bad(key, "must lie in 1..64");
  return static_cast<int>(x);
}

Rational entry(const Json& v, const std::string& field) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number()) bad(field, "floating-point literals are inexact; quote the decimal as a string");
  if (!v.is_string()) bad(field, "expected a number string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const InputError& e) {
    bad(field, e.what());
  }
}

Json exponent_value(const Exponent& e) { return e.infinite ? Json(nullptr) : Json(e.value); }

}  // namespace

Problem parse_problem(const Json& doc) {
  if (!doc.is_object()) bad("<root>", "expected a JSON object");
  for (const auto& [key, _] : doc.items())
    if (key != "m" && key != "n" && key != "theta" && key != "precision_digits") bad(key, "unknown field");
  const int m = positive_int(doc, "m");
  const int n = positive_int(doc, "n");
  if (!doc.contains("theta")) bad("theta", "missing");
  const Json& rows = doc.at("theta");
  if (!rows.is_array()) bad("theta", "expected an array of n rows");
  if (rows.size() != static_cast<std::size_t>(n))
    bad("theta", "has " + std::to_string(rows.size()) + " rows, n = " + std::to_string(n));
  RationalMatrix theta(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string row_field = "theta[" + std::to_string(i) + "]";
    if (!rows[i].is_array()) bad(row_field, "expected an array of m entries");
    if (rows[i].size() != static_cast<std::size_t>(m))
      bad(row_field, "has " + std::to_string(rows[i].size()) + " entries, m = " + std::to_string(m));
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      theta(i, j) = entry(rows[i][j], row_field + "[" + std::to_string(j) + "]");
  }
  int digits = 0;
  if (doc.contains("precision_digits")) {
    const Json& v = doc.at("precision_digits");
    if (!v.is_number_integer() || v.get<long long>() < 0) bad("precision_digits", "expected a non-negative integer");
    digits = static_cast<int>(v.get<long long>());
  }
  return build_problem(m, n, std::move(theta), digits);
}

Problem parse_problem_text(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": not valid JSON (" + e.what() + ")");
  }
  return parse_problem(doc);
}

Problem read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open problem file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem_text(text.str(), path);
}

Json to_json(const Problem& problem) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < problem.theta.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < problem.theta.cols(); ++j) row.push_back(to_string(problem.theta(i, j)));
    rows.push_back(row);
  }
  Json out;
  out["m"] = problem.m;
  out["n"] = problem.n;
  out["theta"] = rows;
  out["precision_digits"] = problem.precision_digits;
  return out;
}

std::string decimal(const HiFloat& x, int digits) { return x.to_string(digits); }

void write_trace_csv(std::ostream& out, const std::vector<TrajectorySample>& samples, const Json& provenance) {
  std::istringstream lines(provenance.dump(2));
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  const std::size_t d = samples.empty() ? 0 : samples.front().lambdas.size();
  out << 's';
  for (const char* col : {"lambda_", "psi_", "Psi_"})
    for (std::size_t i = 1; i <= d; ++i) out << ',' << col << i;
  out << '\n';
  for (const auto& smp : samples) {
    out << decimal(smp.point.s);
    for (const auto* column : {&smp.lambdas, &smp.psi, &smp.Psi})
      for (const auto& v : *column) out << ',' << decimal(v);
    out << '\n';
  }
}

Json to_json(const Exponent& e) {
  Json out;
  out["value"] = exponent_value(e);
  out["infinite"] = e.infinite;
  return out;
}

Json to_json(const ExponentPair& pair, const char* regular, const char* uniform) {
  Json out;
  out[regular] = exponent_value(pair.regular);
  out[uniform] = exponent_value(pair.uniform);
  return out;
}

Json to_json(const Range& r) {
  Json out;
  out["low"] = r.low;
  out["high"] = r.high;
  return out;
}

Json to_json(const SchmidtEstimate& est) {
  Json out;
  out["s_low"] = est.s_low;
  out["s_high"] = est.s_high;
  out["window"] = est.window;
  out["tail_samples"] = est.tail_samples;
  Json psi = Json::array(), Psi = Json::array();
  for (const auto& r : est.psi) psi.push_back(to_json(r));
  for (const auto& r : est.Psi) Psi.push_back(to_json(r));
  out["psi"] = psi;
  out["Psi"] = Psi;
  return out;
}

Json to_json(const ExponentReport& report) {
  Json out;
  out["m"] = report.m;
  out["n"] = report.n;
  out["grid"] = {{"horizon", report.grid.horizon}, {"samples", report.grid.samples}, {"base", report.grid.base}};
  out["window"] = report.window;
  out["starred_horizon"] = report.starred_horizon;
  out["precision_horizon"] = report.precision_horizon;
  out["warnings"] = report.warnings;
  Json grades = Json::array();
  for (const auto& g : report.grades) {
    Json row;
    row["p"] = g.p;
    row["psi"] = to_json(g.psi);
    row["Psi"] = to_json(g.Psi);
    row["first"] = to_json(g.first, "beta", "alpha");
    row["second"] = to_json(g.second, "b", "a");
    row["psi_star"] = to_json(g.psi_star);
    row["Psi_star"] = to_json(g.Psi_star);
    row["first_star"] = to_json(g.first_star, "beta_star", "alpha_star");
    row["second_star"] = to_json(g.second_star, "b_star", "a_star");
    row["infinite"] = g.first.regular.infinite || g.first.uniform.infinite || g.second.regular.infinite ||
                      g.second.uniform.infinite;
    grades.push_back(row);
  }
  out["grades"] = grades;
  out["standard"] = to_json(report.standard);
  out["starred"] = to_json(report.starred);
  return out;
}

Json to_json(const CheckResult& r) {
  Json out;
  out["check"] = r.id;
  out["class"] = r.instance_class;
  out["status"] = to_string(r.status);
  out["instances"] = r.instances;
  out["skipped"] = r.skipped;
  out["worst_margin"] = r.worst_margin;
  out["tolerance"] = r.tolerance;
  out["detail"] = r.detail;
  return out;
}

Json to_json(const SolutionCertificate& cert) {
  Json out;
  out["kind"] = to_string(cert.kind);
  out["norm"] = to_string(cert.norm);
  out["grade"] = cert.grade;
  out["t"] = to_string(cert.t);
  out["gamma"] = to_string(cert.gamma);
  Json vectors = Json::array();
  for (const auto& v : cert.vectors) {
    Json row = Json::array();
    for (const auto& z : v) row.push_back(z.get_str());
    vectors.push_back(row);
  }
  out["vectors"] = vectors;
  return out;
}

Json to_json(const StaircasePoint& point) {
  Json out;
  out["t"] = to_string(point.t);
  out["s"] = point.s;
  out["gamma"] = point.infinite || point.degenerate ? Json(nullptr) : Json(point.gamma);
  out["infinite"] = point.infinite;
  out["below_bracket"] = point.below_bracket;
  out["degenerate"] = point.degenerate;
  return out;
}

Json to_json(const AgreementReport& report) {
  Json out;
  out["probes"] = report.probes;
  out["evaluations"] = report.evaluations;
  out["mismatches"] = report.mismatches;
  out["agree"] = report.agree();
  if (!report.first_mismatch.empty()) out["first_mismatch"] = report.first_mismatch;
  return out;
}

Json provenance(const Json& config) {
  Json out;
  out["tool"] = tool_name();
  out["version"] = tool_version();
  out["config"] = config;
  return out;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace pgn::io
