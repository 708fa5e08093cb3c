// SPDX-License-Identifier: Apache-2.0
//
// Problem files, CSV traces and JSON reports.
//
// Problem file (JSON):
//   {"m": 1, "n": 2, "theta": [["0.4142..."], ["1/3"]], "precision_digits": 40}
// theta has n rows of m entries; entries are strings holding an integer, a
// fraction a/b or a decimal, or plain JSON integers.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "pgn/direct.hpp"
#include "pgn/problem.hpp"
#include "pgn/trajectories.hpp"
#include "pgn/verify.hpp"

namespace pgn::io {

using Json = nlohmann::ordered_json;

const char* tool_name();
const char* tool_version();

/// Throws InputError naming the offending field.
Problem parse_problem(const Json& doc);
Problem parse_problem_text(const std::string& text, const std::string& source = "problem");
Problem read_problem(const std::string& path);
Json to_json(const Problem& problem);

/// Decimal string with `digits` significant digits.
std::string decimal(const HiFloat& x, int digits = 30);

/// '#'-prefixed provenance lines, then a header
///   s,lambda_1..d,psi_1..d,Psi_1..d
/// and one row per sample.
void write_trace_csv(std::ostream& out, const std::vector<TrajectorySample>& samples, const Json& provenance);

Json to_json(const Exponent& e);
Json to_json(const ExponentPair& pair, const char* regular, const char* uniform);
Json to_json(const Range& r);
Json to_json(const SchmidtEstimate& est);
Json to_json(const ExponentReport& report);
Json to_json(const CheckResult& result);
Json to_json(const SolutionCertificate& cert);
Json to_json(const StaircasePoint& point);
Json to_json(const AgreementReport& report);

/// {"tool", "version", "config"} for embedding in every output.
Json provenance(const Json& config);

/// Two-space indented, newline-terminated.
std::string dump(const Json& doc);

}  // namespace pgn::io
