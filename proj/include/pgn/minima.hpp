// SPDX-License-Identifier: Apache-2.0
//
// Successive minima of an axis-aligned box with respect to a lattice, in the
// sup-norm. The box is folded into the lattice (diag(1/h) * basis), the
// scaled basis is LLL-reduced in MPFR, and lattice points are enumerated
// inside a Euclidean ball that covers the sup-norm ball of the current
// radius. Every candidate is re-evaluated from the exact basis, so the float
// stages only decide what gets looked at, never what gets reported.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pgn/numerics.hpp"
#include "pgn/problem.hpp"

namespace pgn {

enum class MinimaMode { exact, certified_float };

struct MinimaOptions {
  MinimaMode mode = MinimaMode::exact;
  /// Number of minima wanted; 0 means all of them.
  std::size_t count = 0;
  /// Hard cap on enumeration nodes per query.
  std::uint64_t budget = 10'000'000;
  /// Largest acceptable relative error bound in certified_float mode.
  double eps = 1e-9;
  double lll_delta = 0.99;
};

struct MinimaResult {
  std::vector<HiFloat> lambdas;
  /// Present in exact mode.
  std::optional<RationalVector> exact_lambdas;
  /// Integer coordinates of the witnesses in the lattice basis. The first
  /// nonzero coordinate is positive; among witnesses of equal norm the
  /// lexicographically smallest coordinate vector wins.
  std::vector<IntegerVector> coefficients;
  std::vector<RationalVector> witnesses;
  MinimaMode mode = MinimaMode::exact;
  /// Largest relative error bound among the lambdas (0 in exact mode).
  double error_bound = 0.0;
  std::uint64_t enumerated = 0;
};

MinimaResult successive_minima(const LatticeBasis& lat, const Box& box, const MinimaOptions& options = {});

/// Sup-norm of v measured against the box: max_i |v_i| / h_i.
Rational box_norm(const RationalVector& v, const RationalVector& half_widths);
HiFloat box_norm(const RationalVector& v, const std::vector<HiFloat>& half_widths);

/// Unimodular U such that basis * U is LLL-reduced (columns are vectors).
/// Works on the float images of the columns at the given precision.
std::vector<IntegerVector> lll_transform(const std::vector<std::vector<Real>>& columns, double delta);

/// lambda_1 of the hat-path box D_{tau_hat(s)} B_inf^r with respect to
/// wedge^p(Lambda), at the exact grid point s = scale * ln u. This is
/// P_hat_{gamma_0}(t) with t = e^{kappa s}.
MinimaResult compound_first_minimum(const Problem& problem, int p, const Rational& u, const Integer& scale,
                                    MinimaMode mode = MinimaMode::exact);

}  // namespace pgn
