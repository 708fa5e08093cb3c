// SPDX-License-Identifier: Apache-2.0

#include "pgn/trajectories.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

namespace pgn {

namespace {

int grid_digits(unsigned base) {
  // enough base-b digits for ~1e-9 relative resolution in u
  return static_cast<int>(std::ceil(30.0 * std::log(2.0) / std::log(static_cast<double>(base))));
}

}  // namespace

GridPoint grid_point(const PathSpec& spec, double s, unsigned base) {
  if (!(s > 0) || !std::isfinite(s)) throw InputError("grid: s must be positive and finite");
  if (base < 2) throw InputError("grid: base must be at least 2");
  const Integer scale = path_scale(spec);
  Integer denom;
  mpz_ui_pow_ui(denom.get_mpz_t(), base, static_cast<unsigned long>(grid_digits(base)));
  Real target = exp(Real(s, kDefaultPrecision) / Real(scale, kDefaultPrecision)) * Real(denom, kDefaultPrecision);
  Integer num = target.round_to_integer();
  if (num <= denom) num = denom + 1;
  GridPoint point{make_rational(num, denom), scale, HiFloat()};
  point.s = log(HiFloat(point.u)) * HiFloat(Rational(scale));
  return point;
}

std::vector<GridPoint> make_grid(const PathSpec& spec, const GridSpec& grid) {
  if (grid.samples == 0) throw InputError("grid: at least one sample is required");
  if (!(grid.horizon > 0) || !std::isfinite(grid.horizon)) throw InputError("grid: horizon must be positive");
  std::vector<GridPoint> out;
  out.reserve(grid.samples);
  for (std::size_t k = 1; k <= grid.samples; ++k)
    out.push_back(grid_point(spec, grid.horizon * static_cast<double>(k) / static_cast<double>(grid.samples), grid.base));
  return out;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

TrajectorySample make_sample(const GridPoint& point, MinimaResult&& r) {
  TrajectorySample sample;
  sample.point = point;
  sample.lambdas = std::move(r.lambdas);
  sample.exact_lambdas = std::move(r.exact_lambdas);
  sample.witnesses = std::move(r.coefficients);
  sample.enumerated = r.enumerated;
  HiFloat acc(Rational(0));
  for (std::size_t i = 0; i < sample.lambdas.size(); ++i) {
    HiFloat ln = sample.exact_lambdas ? log(HiFloat((*sample.exact_lambdas)[i])) : log(sample.lambdas[i]);
    sample.psi.push_back(ln / point.s);
    acc = acc + sample.psi.back();
    sample.Psi.push_back(acc);
  }
  return sample;
}

std::vector<TrajectorySample> run_trace(const LatticeBasis& lat, const PathSpec& spec, const std::vector<GridPoint>& grid,
                                        const TraceOptions& options, std::size_t count) {
  std::vector<TrajectorySample> out(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    Box box = box_B_exact(spec, grid[i].u, grid[i].scale);
    if (options.mode == MinimaMode::certified_float) box.exact.reset();
    MinimaOptions mo;
    mo.mode = options.mode;
    mo.count = count;
    mo.budget = options.budget;
    out[i] = make_sample(grid[i], successive_minima(lat, box, mo));
  });
  return out;
}

}  // namespace

std::vector<TrajectorySample> trace(const LatticeBasis& lat, const PathSpec& spec, const std::vector<GridPoint>& grid,
                                    const TraceOptions& options) {
  if (spec.rates.size() != lat.dim()) throw DimensionError("trace: path and lattice dimensions differ");
  return run_trace(lat, spec, grid, options, 0);
}

std::vector<TrajectorySample> trace(const Problem& problem, PathKind kind, const std::vector<GridPoint>& grid,
                                    const TraceOptions& options) {
  const LatticeBasis lat = kind == PathKind::starred ? dual_lattice(problem) : lattice(problem);
  return trace(lat, path(problem, kind), grid, options);
}

std::vector<TrajectorySample> trace_hat(const Problem& problem, int p, const std::vector<GridPoint>& grid,
                                        const TraceOptions& options) {
  if (p < 1 || p > problem.d()) throw DimensionError("trace_hat: grade out of range");
  const PathSpec hat = hat_path(path(problem, PathKind::standard), p);
  return run_trace(compound_lattice(lattice(problem), p), hat, grid, options, 1);
}

Range tail_range(const std::vector<double>& s, const std::vector<double>& values, double window) {
  if (s.size() != values.size()) throw DimensionError("tail_range: length mismatch");
  if (!(window > 0 && window <= 1)) throw InputError("window must lie in (0, 1]");
  if (s.empty()) throw InsufficientSamples("no samples");
  const double s_max = *std::max_element(s.begin(), s.end());
  const double start = s_max * (1.0 - window);
  Range r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  std::size_t count = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < start) continue;
    r.low = std::min(r.low, values[i]);
    r.high = std::max(r.high, values[i]);
    ++count;
  }
  if (count < kMinTailSamples) {
    std::ostringstream msg;
    msg << "tail window [" << start << ", " << s_max << "] holds " << count << " samples, need " << kMinTailSamples;
    throw InsufficientSamples(msg.str());
  }
  return r;
}

SchmidtEstimate estimate_schmidt(const std::vector<TrajectorySample>& samples, double window) {
  if (samples.empty()) throw InsufficientSamples("no samples");
  SchmidtEstimate est;
  est.window = window;
  std::vector<double> s;
  for (const auto& x : samples) s.push_back(x.s());
  est.s_high = *std::max_element(s.begin(), s.end());
  est.s_low = est.s_high * (1.0 - window);
  est.tail_samples = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v >= est.s_low; }));
  const std::size_t d = samples.front().psi.size();
  std::vector<double> v(samples.size());
  for (std::size_t p = 0; p < d; ++p) {
    for (std::size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].psi.at(p).to_double();
    est.psi.push_back(tail_range(s, v, window));
    for (std::size_t i = 0; i < samples.size(); ++i) v[i] = samples[i].Psi.at(p).to_double();
    est.Psi.push_back(tail_range(s, v, window));
  }
  return est;
}

namespace {

Exponent convert(double numerator, double denominator) {
  if (denominator <= kDegenerateEps) return {std::numeric_limits<double>::infinity(), true};
  return {numerator / denominator - 1.0, false};
}

}  // namespace

ExponentPair first_type_exponents(const Range& psi, int m, int n) {
  const double dn = static_cast<double>(m + n) / n;
  return {convert(dn, 1.0 + psi.low), convert(dn, 1.0 + psi.high)};
}

ExponentPair second_type_exponents(const Range& Psi, int m, int n, int p) {
  const double dn = static_cast<double>(m + n) / n;
  const double k = kappa(m, n, p).get_d();
  return {convert(dn, k + Psi.low), convert(dn, k + Psi.high)};
}

double matched_starred_horizon(const Problem& problem, double horizon) {
  return horizon * problem.m / problem.n;
}

ExponentReport exponent_report(const Problem& problem, const std::vector<TrajectorySample>& standard,
                               const std::vector<TrajectorySample>& starred, const GridSpec& grid, double window) {
  ExponentReport report;
  report.m = problem.m;
  report.n = problem.n;
  report.grid = grid;
  report.window = window;
  report.starred_horizon = matched_starred_horizon(problem, grid.horizon);
  report.standard = estimate_schmidt(standard, window);
  report.starred = estimate_schmidt(starred, window);
  report.precision_horizon = horizon_budget(problem);
  if (report.precision_horizon == 0.0) {
    report.warnings.push_back("Theta is integral: every exponent is degenerate");
  } else if (report.standard.s_high > report.precision_horizon) {
    std::ostringstream msg;
    msg << "horizon " << report.standard.s_high << " exceeds the precision horizon " << report.precision_horizon
        << " of the truncated Theta; tail estimates see the rational approximation";
    report.warnings.push_back(msg.str());
  }
  const int m = problem.m, n = problem.n, d = problem.d();
  for (int p = 1; p < d; ++p) {
    GradeReport g;
    g.p = p;
    const auto i = static_cast<std::size_t>(p - 1);
    g.psi = report.standard.psi[i];
    g.Psi = report.standard.Psi[i];
    g.first = first_type_exponents(g.psi, m, n);
    g.second = second_type_exponents(g.Psi, m, n, p);
    g.psi_star = report.starred.psi[i];
    g.Psi_star = report.starred.Psi[i];
    g.first_star = first_type_exponents(g.psi_star, n, m);
    g.second_star = second_type_exponents(g.Psi_star, n, m, p);
    for (const auto* e : {&g.first.regular, &g.first.uniform, &g.second.regular, &g.second.uniform,
                          &g.first_star.regular, &g.first_star.uniform, &g.second_star.regular,
                          &g.second_star.uniform})
      if (e->infinite) {
        report.warnings.push_back("p = " + std::to_string(p) + ": infinite exponent flagged (degenerate denominator)");
        break;
      }
    report.grades.push_back(g);
  }
  return report;
}

ExponentReport exponent_report(const Problem& problem, const GridSpec& grid, double window, const TraceOptions& options) {
  const auto standard = trace(problem, PathKind::standard, make_grid(path(problem, PathKind::standard), grid), options);
  GridSpec star_grid = grid;
  star_grid.horizon = matched_starred_horizon(problem, grid.horizon);
  const auto starred = trace(problem, PathKind::starred, make_grid(path(problem, PathKind::starred), star_grid), options);
  return exponent_report(problem, standard, starred, grid, window);
}

}  // namespace pgn
