// SPDX-License-Identifier: Apache-2.0
//
// Successive-minima trajectories along diagonal paths, tail-window estimates
// of Schmidt's exponents and their conversion into Diophantine exponents.
//
// Samples live on an exact grid: s = L ln u with L = path_scale(path) and u a
// rational with a power-of-b denominator, chosen so that s lands within about
// 1e-9 (relative) of the requested value. Every half-width e^{rate s} is then
// the rational u^{L rate}.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pgn/minima.hpp"
#include "pgn/problem.hpp"

namespace pgn {

/// Raised when a tail window holds too few samples to estimate anything.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

inline constexpr double kDegenerateEps = 1e-6;
inline constexpr std::size_t kMinTailSamples = 10;

struct GridSpec {
  double horizon = 30.0;  // s_max
  std::size_t samples = 40;
  unsigned base = 2;  // radix of the denominators of the grid points u
};

struct GridPoint {
  Rational u;
  Integer scale;
  HiFloat s;  // scale * ln u
};

/// Points s_k ~ horizon * k / samples, k = 1..samples, on the exact grid of
/// `spec`.
std::vector<GridPoint> make_grid(const PathSpec& spec, const GridSpec& grid);
/// A grid point near an arbitrary s > 0.
GridPoint grid_point(const PathSpec& spec, double s, unsigned base = 2);

struct TraceOptions {
  MinimaMode mode = MinimaMode::exact;
  /// Worker threads; 0 means hardware concurrency.
  unsigned threads = 0;
  std::uint64_t budget = 10'000'000;
};

struct TrajectorySample {
  GridPoint point;
  std::vector<HiFloat> lambdas;
  std::optional<RationalVector> exact_lambdas;
  /// Coordinates of the attaining vectors in the lattice basis.
  std::vector<IntegerVector> witnesses;
  std::vector<HiFloat> psi;  // ln(lambda_p) / s
  std::vector<HiFloat> Psi;  // partial sums of psi
  std::uint64_t enumerated = 0;

  double s() const { return point.s.to_double(); }
};

/// One sample per grid point: all successive minima of B(s) w.r.t. `lat`.
std::vector<TrajectorySample> trace(const LatticeBasis& lat, const PathSpec& spec, const std::vector<GridPoint>& grid,
                                    const TraceOptions& options = {});
/// Lambda with the standard path, or Lambda* with the starred one.
std::vector<TrajectorySample> trace(const Problem& problem, PathKind kind, const std::vector<GridPoint>& grid,
                                    const TraceOptions& options = {});
/// psi_1 of wedge^p(Lambda) along the hat path; one-minimum samples. `grid`
/// must be built for the standard path (its scale clears the hat rates).
std::vector<TrajectorySample> trace_hat(const Problem& problem, int p, const std::vector<GridPoint>& grid,
                                        const TraceOptions& options = {});

/// Runs `task(i)` for i in [0, count) on a small worker pool. Exceptions are
/// rethrown in index order once all workers are done.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task);

struct Range {
  double low = 0.0;
  double high = 0.0;
};

/// min/max of values over samples with s in [s_max (1 - window), s_max].
/// Throws InsufficientSamples below kMinTailSamples.
Range tail_range(const std::vector<double>& s, const std::vector<double>& values, double window);

struct SchmidtEstimate {
  double s_low = 0.0;   // window start
  double s_high = 0.0;  // s_max
  double window = 0.5;
  std::size_t tail_samples = 0;
  /// Index p - 1 holds the estimates for grade p.
  std::vector<Range> psi;
  std::vector<Range> Psi;
};

SchmidtEstimate estimate_schmidt(const std::vector<TrajectorySample>& samples, double window = 0.5);

struct Exponent {
  double value = 0.0;
  bool infinite = false;
};

struct ExponentPair {
  Exponent regular;  // beta / b-frak: from the liminf
  Exponent uniform;  // alpha / a-frak: from the limsup
};

/// (1 + beta)(1 + psi_low) = (1 + alpha)(1 + psi_high) = d / n.
ExponentPair first_type_exponents(const Range& psi, int m, int n);
/// (1 + b)(kappa + Psi_low) = (1 + a)(kappa + Psi_high) = d / n.
ExponentPair second_type_exponents(const Range& Psi, int m, int n, int p);

struct GradeReport {
  int p = 0;
  Range psi, Psi;
  ExponentPair first;   // beta_p, alpha_p
  ExponentPair second;  // b_p, a_p
  Range psi_star, Psi_star;
  ExponentPair first_star;   // beta*_p, alpha*_p
  ExponentPair second_star;  // b*_p, a*_p
};

struct ExponentReport {
  int m = 0;
  int n = 0;
  GridSpec grid;
  double window = 0.5;
  /// Starred samples run to the matched horizon (m / n) * grid.horizon.
  double starred_horizon = 0.0;
  SchmidtEstimate standard;
  SchmidtEstimate starred;
  double precision_horizon = 0.0;  // 0 when Theta is integral
  std::vector<std::string> warnings;
  std::vector<GradeReport> grades;  // p = 1..d-1
};

/// Horizon for the Lambda* trace that probes the same boxes as Lambda up to s.
double matched_starred_horizon(const Problem& problem, double horizon);

ExponentReport exponent_report(const Problem& problem, const std::vector<TrajectorySample>& standard,
                               const std::vector<TrajectorySample>& starred, const GridSpec& grid, double window);
ExponentReport exponent_report(const Problem& problem, const GridSpec& grid, double window = 0.5,
                               const TraceOptions& options = {});

}  // namespace pgn
