// SPDX-License-Identifier: Apache-2.0

#include "pgn/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pgn {

const char* to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::first_type: return "first-type";
    case CertificateKind::second_type_original: return "second-type-original";
    case CertificateKind::second_type_modified: return "second-type-modified";
  }
  return "?";
}

const char* to_string(WedgeNorm norm) { return norm == WedgeNorm::theta ? "theta" : "standard"; }

const char* to_string(StaircaseKind kind) {
  return kind == StaircaseKind::first_type ? "first-type" : "second-type";
}

// ---------------------------------------------------------------------------
// Powers

PowerBound::PowerBound(const Rational& t, const Rational& e) : t_(t), e_(e) {
  if (t <= 0) throw InputError("power bound: t must be positive");
  exact_ = exact_power(t, e);
  log_ = HiFloat(e) * log(HiFloat(t));
  value_ = exp(log_);
}

bool PowerBound::admits(const Rational& v) const {
  if (v < 0) throw InputError("power bound: negative left-hand side");
  if (v == 0) return true;
  if (exact_) return v <= *exact_;
  const int c = compare_certified(log(HiFloat(v)), log_);
  if (c != 0) return c < 0;
  const Integer& a = e_.get_num();
  const Integer& b = e_.get_den();
  if (!a.fits_slong_p() || !b.fits_slong_p() || abs(a) > 10000 || b > 10000)
    throw PrecisionExhausted("power bound: comparison undecided and exponent too large for exact powers");
  return pow(v, b.get_si()) <= pow(t_, a.get_si());
}

Rational PowerBound::upper() const {
  if (exact_) return *exact_;
  Real hi = value_.value() + value_.err() + value_.err();
  Rational q = hi.to_rational();
  return q + q / Rational(Integer(1) << 100);
}

bool le_power(const Rational& v, const Rational& t, const Rational& e) { return PowerBound(t, e).admits(v); }

// ---------------------------------------------------------------------------
// First type

namespace {

Integer floor_q(const Rational& q) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

Integer ceil_q(const Rational& q) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

// Advances v through the box [lo, hi] in lexicographic order, last
// coordinate fastest. Returns false after the last point.
bool advance(IntegerVector& v, const IntegerVector& lo, const IntegerVector& hi) {
  for (std::size_t i = v.size(); i-- > 0;) {
    if (v[i] < hi[i]) {
      ++v[i];
      return true;
    }
    v[i] = lo[i];
  }
  return false;
}

void check_grade(const Problem& problem, int p) {
  if (p < 1 || p > problem.d()) throw DimensionError("oracle: grade must lie in 1..d");
}

}  // namespace

bool satisfies_first_type(const Problem& problem, const IntegerVector& z, const Rational& gamma, const Rational& t) {
  const int m = problem.m, n = problem.n;
  if (static_cast<int>(z.size()) != problem.d()) throw DimensionError("first type: vector length differs from d");
  for (int j = 0; j < m; ++j)
    if (abs(Rational(z[static_cast<std::size_t>(j)])) > t) return false;
  Rational residual(0);
  for (int i = 0; i < n; ++i) {
    Rational v = -Rational(z[static_cast<std::size_t>(m + i)]);
    for (int j = 0; j < m; ++j) v += problem.theta(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) * z[static_cast<std::size_t>(j)];
    residual = std::max(residual, abs(v));
  }
  return le_power(residual, t, -gamma);
}

std::optional<SolutionCertificate> first_type_feasible(const Problem& problem, int p, const Rational& gamma,
                                                       const Rational& t, const OracleOptions& options) {
  check_grade(problem, p);
  if (t < 1) throw InputError("first type: t must be at least 1");
  const auto m = static_cast<std::size_t>(problem.m), n = static_cast<std::size_t>(problem.n);
  const PowerBound window(t, -gamma);
  const Rational w = window.upper();
  const Integer X = floor_q(t);

  SolutionCertificate cert{CertificateKind::first_type, WedgeNorm::standard, p, t, gamma, {}};
  IndependenceTracker tracker(m + n);
  std::uint64_t visited = 0;
  IntegerVector x(m, -X), xlo(m, -X), xhi(m, X);
  do {
    RationalVector c(n, Rational(0));
    IntegerVector ylo(n), yhi(n);
    bool empty = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) c[i] += problem.theta(i, j) * x[j];
      ylo[i] = ceil_q(c[i] - w);
      yhi[i] = floor_q(c[i] + w);
      if (ylo[i] > yhi[i]) empty = true;
    }
    if (empty) continue;
    IntegerVector y = ylo;
    do {
      if (++visited > options.budget) throw BudgetExceeded("first-type oracle: enumeration budget exceeded");
      Rational residual(0);
      bool zero = true;
      for (std::size_t i = 0; i < n; ++i) {
        residual = std::max(residual, Rational(abs(c[i] - y[i])));
        if (y[i] != 0) zero = false;
      }
      for (const auto& xi : x)
        if (xi != 0) zero = false;
      if (zero || !window.admits(residual)) continue;
      IntegerVector z = x;
      z.insert(z.end(), y.begin(), y.end());
      if (tracker.try_add(z)) {
        cert.vectors.push_back(z);
        if (static_cast<int>(cert.vectors.size()) == p) return cert;
      }
    } while (advance(y, ylo, yhi));
  } while (advance(x, xlo, xhi));
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Second type

SecondTypeSystem::SecondTypeSystem(const Problem& problem, int p, CertificateKind variant, WedgeNorm norm)
    : p_(p), variant_(variant), norm_(norm) {
  const int d = problem.d(), m = problem.m;
  if (p < 0 || p > d) throw DimensionError("second type: grade out of range");
  if (variant == CertificateKind::first_type) throw InputError("second type: not a second-type variant");
  r_ = binomial(d, p);
  k0_ = k_low(m, problem.n, p);
  Subset head, tail;
  for (int i = 0; i < d; ++i) (i < m ? head : tail).push_back(i);
  const RationalMatrix t_inv = lattice(problem).basis;

  // Coordinates of a grade-q multivector in the basis L_rho ^ E_rho'.
  auto coordinates = [&](const Multivector& w) -> RationalVector {
    if (norm == WedgeNorm::standard || w.grade() == 0) return w.coeffs();
    return mat_vec(compound_matrix(t_inv, w.grade()), w.coeffs());
  };
  auto add_forms = [&](const Multivector& left, std::vector<RationalVector>& out) {
    const int q = left.grade() + p;
    if (q > d) return;
    std::vector<RationalVector> columns;
    for (std::size_t j = 0; j < r_; ++j)
      columns.push_back(coordinates(wedge(left, Multivector::basis(d, subset_unrank(j, p, d)))));
    for (std::size_t i = 0; i < columns.front().size(); ++i) {
      RationalVector form(r_);
      bool nonzero = false;
      for (std::size_t j = 0; j < r_; ++j) {
        form[j] = columns[j][i];
        if (form[j] != 0) nonzero = true;
      }
      if (nonzero) out.push_back(std::move(form));
    }
  };

  if (variant == CertificateKind::second_type_original) {
    for (int k = 0; k <= m; ++k) {
      ks_.push_back(k);
      forms_.emplace_back();
      for (const auto& sigma : subsets_of(head, k)) add_forms(L_sigma(problem, sigma), forms_.back());
    }
  } else {
    const int k1 = k_high(m, problem.n, p);
    for (int k = k0_; k <= k1; ++k) {
      ks_.push_back(k);
      forms_.emplace_back();
      for (const auto& sigma : subsets_of(head, k))
        for (const auto& sigma2 : subsets_of(tail, d - p - k))
          add_forms(wedge(L_sigma(problem, sigma), E_sigma(problem, sigma2)), forms_.back());
    }
  }
}

std::vector<Rational> SecondTypeSystem::levels(const RationalVector& z) const {
  if (z.size() != r_) throw DimensionError("second type: multivector size mismatch");
  std::vector<Rational> out;
  for (const auto& level : forms_) {
    Rational best(0);
    for (const auto& form : level) best = std::max(best, abs(dot(form, z)));
    out.push_back(best);
  }
  return out;
}

std::vector<Rational> SecondTypeSystem::exponents(const Rational& gamma) const {
  std::vector<Rational> out;
  for (int k : ks_) out.push_back(Rational(1) - Rational(k - k0_) * (Rational(1) + gamma));
  return out;
}

std::vector<PowerBound> SecondTypeSystem::bounds(const Rational& gamma, const Rational& t) const {
  std::vector<PowerBound> out;
  for (const auto& e : exponents(gamma)) out.emplace_back(t, e);
  return out;
}

bool SecondTypeSystem::satisfied(const std::vector<Rational>& levels, const std::vector<PowerBound>& bounds) {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (!bounds[i].admits(levels[i])) return false;
  return true;
}

bool SecondTypeSystem::satisfied(const RationalVector& z, const Rational& gamma, const Rational& t) const {
  return satisfied(levels(z), bounds(gamma, t));
}

void for_each_multivector(std::size_t r, long bound, std::uint64_t budget,
                          const std::function<bool(const RationalVector&)>& visit) {
  if (bound < 1) throw InputError("multivector search: bound must be positive");
  const long double total = std::pow(static_cast<long double>(2 * bound + 1), static_cast<long double>(r));
  if ((total - 1) / 2 > static_cast<long double>(budget))
    throw BudgetExceeded("multivector search: bound " + std::to_string(bound) + " exceeds the enumeration budget");
  IntegerVector v(r, Integer(-bound)), lo(r, Integer(-bound)), hi(r, Integer(bound));
  RationalVector z(r);
  do {
    std::size_t lead = 0;
    while (lead < r && v[lead] == 0) ++lead;
    if (lead == r || v[lead] < 0) continue;
    for (std::size_t i = 0; i < r; ++i) z[i] = v[i];
    if (!visit(z)) return;
  } while (advance(v, lo, hi));
}

std::optional<SolutionCertificate> second_type_feasible(const Problem& problem, int p, const Rational& gamma,
                                                        const Rational& t, CertificateKind variant, long bound,
                                                        WedgeNorm norm, const OracleOptions& options) {
  check_grade(problem, p);
  const SecondTypeSystem system(problem, p, variant, norm);
  const auto bounds = system.bounds(gamma, t);
  std::optional<SolutionCertificate> cert;
  for_each_multivector(system.size(), bound, options.budget, [&](const RationalVector& z) {
    if (!SecondTypeSystem::satisfied(system.levels(z), bounds)) return true;
    IntegerVector coeffs;
    for (const auto& c : z) coeffs.push_back(c.get_num());
    cert = SolutionCertificate{variant, norm, p, t, gamma, {coeffs}};
    return false;
  });
  return cert;
}

long exhaustive_bound(const Problem& problem, int p, const Rational& t) {
  const RationalMatrix c = compound_matrix(t_matrix(problem), p);
  Rational row_max(0);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    Rational sum(0);
    for (std::size_t j = 0; j < c.cols(); ++j) sum += abs(c(i, j));
    row_max = std::max(row_max, sum);
  }
  const Integer b = floor_q(row_max * t);
  if (!b.fits_slong_p()) throw BudgetExceeded("exhaustive bound out of range");
  return std::max(1L, b.get_si());
}

// ---------------------------------------------------------------------------
// Agreement checks

namespace {

std::string describe(const RationalVector& z, const Rational& gamma, const Rational& t) {
  std::ostringstream out;
  out << "Z = (";
  for (std::size_t i = 0; i < z.size(); ++i) out << (i ? ", " : "") << to_string(z[i]);
  out << ") at gamma = " << to_string(gamma) << ", t = " << to_string(t);
  return out.str();
}

struct Probe {
  Rational gamma, t;
};

std::vector<Probe> probes(const std::vector<Rational>& gammas, const std::vector<Rational>& ts) {
  std::vector<Probe> out;
  for (const auto& t : ts)
    for (const auto& g : gammas) out.push_back({g, t});
  return out;
}

}  // namespace

AgreementReport equivalence_check(const Problem& problem, int p, const std::vector<Rational>& gammas,
                                  const std::vector<Rational>& ts, long bound, const OracleOptions& options) {
  check_grade(problem, p);
  for (const auto& t : ts)
    if (t < 1) throw InputError("equivalence check: t must be at least 1");
  for (const auto& g : gammas)
    if (g <= -1) throw InputError("equivalence check: 1 + gamma must be positive");
  const SecondTypeSystem original(problem, p, CertificateKind::second_type_original, WedgeNorm::theta);
  const SecondTypeSystem modified(problem, p, CertificateKind::second_type_modified, WedgeNorm::theta);
  const auto grid = probes(gammas, ts);
  std::vector<std::vector<PowerBound>> bo, bm;
  for (const auto& pr : grid) {
    bo.push_back(original.bounds(pr.gamma, pr.t));
    bm.push_back(modified.bounds(pr.gamma, pr.t));
  }
  AgreementReport report;
  report.probes = grid.size();
  for_each_multivector(original.size(), bound, options.budget, [&](const RationalVector& z) {
    ++report.evaluations;
    const auto lo = original.levels(z), lm = modified.levels(z);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (SecondTypeSystem::satisfied(lo, bo[i]) == SecondTypeSystem::satisfied(lm, bm[i])) continue;
      if (report.mismatches++ == 0) report.first_mismatch = describe(z, grid[i].gamma, grid[i].t);
    }
    return true;
  });
  return report;
}

std::vector<int> transfer_permutation(int m, int n) {
  std::vector<int> perm;
  for (int i = 0; i < m + n; ++i) perm.push_back(i >= m ? i - m : i + n);
  return perm;
}

AgreementReport hodge_transfer_check(const Problem& problem, int p, const std::vector<Rational>& gammas,
                                     const std::vector<Rational>& ts, long bound, const OracleOptions& options) {
  const int d = problem.d();
  if (p < 1 || p >= d) throw DimensionError("Hodge transfer: grade must lie in 1..d-1");
  const Problem star = transposed(problem, true);
  const SecondTypeSystem direct(problem, p, CertificateKind::second_type_modified, WedgeNorm::standard);
  const SecondTypeSystem dual(star, d - p, CertificateKind::second_type_modified, WedgeNorm::standard);
  const auto perm = transfer_permutation(problem.m, problem.n);
  const auto grid = probes(gammas, ts);
  std::vector<std::vector<PowerBound>> b1, b2;
  for (const auto& pr : grid) {
    b1.push_back(direct.bounds(pr.gamma, pr.t));
    b2.push_back(dual.bounds(pr.gamma, pr.t));
  }
  AgreementReport report;
  report.probes = grid.size();
  for_each_multivector(direct.size(), bound, options.budget, [&](const RationalVector& z) {
    ++report.evaluations;
    const RationalVector w = permute(hodge_star(Multivector(d, p, z)), perm).coeffs();
    const auto l1 = direct.levels(z), l2 = dual.levels(w);
    if (l1 != l2) {
      if (report.mismatches++ == 0) report.first_mismatch = describe(z, Rational(0), Rational(1)) + ": levels differ";
      return true;
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (SecondTypeSystem::satisfied(l1, b1[i]) == SecondTypeSystem::satisfied(l2, b2[i])) continue;
      if (report.mismatches++ == 0) report.first_mismatch = describe(z, grid[i].gamma, grid[i].t);
    }
    return true;
  });
  return report;
}

AgreementReport grade_one_check(const Problem& problem, const std::vector<Rational>& gammas,
                                const std::vector<Rational>& ts, const OracleOptions& options) {
  AgreementReport report;
  for (const auto& pr : probes(gammas, ts)) {
    ++report.probes;
    const bool first = first_type_feasible(problem, 1, pr.gamma, pr.t, options).has_value();
    const long bound = exhaustive_bound(problem, 1, pr.t);
    for (auto variant : {CertificateKind::second_type_original, CertificateKind::second_type_modified}) {
      ++report.evaluations;
      const bool second = second_type_feasible(problem, 1, pr.gamma, pr.t, variant, bound, WedgeNorm::theta, options).has_value();
      if (first == second) continue;
      if (report.mismatches++ == 0)
        report.first_mismatch = std::string(to_string(variant)) + " disagrees at gamma = " + to_string(pr.gamma) +
                                ", t = " + to_string(pr.t);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Staircase

bool feasible(const Problem& problem, int p, StaircaseKind kind, const Rational& gamma, const Rational& t,
              const StaircaseOptions& options) {
  check_grade(problem, p);
  if (options.engine == FeasibilityEngine::oracle) {
    if (kind == StaircaseKind::first_type) return first_type_feasible(problem, p, gamma, t, options.oracle).has_value();
    return second_type_feasible(problem, p, gamma, t, CertificateKind::second_type_modified,
                                exhaustive_bound(problem, p, t), WedgeNorm::theta, options.oracle)
        .has_value();
  }
  MinimaOptions mo;
  mo.budget = options.oracle.budget;
  if (kind == StaircaseKind::first_type) {
    Box box = box_P(problem, gamma, t);
    if (!box.is_exact()) box = rationalized(box);
    mo.count = static_cast<std::size_t>(p);
    const MinimaResult r = successive_minima(lattice(problem), box, mo);
    return (*r.exact_lambdas)[static_cast<std::size_t>(p - 1)] <= 1;
  }
  Box box = box_P_hat(problem, p, gamma, t);
  if (!box.is_exact()) box = rationalized(box);
  mo.count = 1;
  const MinimaResult r = successive_minima(compound_lattice(lattice(problem), p), box, mo);
  return (*r.exact_lambdas)[0] <= 1;
}

std::vector<StaircasePoint> staircase_exponent(const Problem& problem, int p, const std::vector<Rational>& ts,
                                               StaircaseKind kind, const StaircaseOptions& options,
                                               unsigned threads) {
  if (!(options.tolerance > 0)) throw InputError("staircase: tolerance must be positive");
  if (!(options.gamma_low > -1.0 && options.gamma_low < options.gamma_high))
    throw InputError("staircase: bracket must satisfy -1 < low < high");
  std::vector<StaircasePoint> out(ts.size());
  parallel_for(ts.size(), threads, [&](std::size_t i) {
    const Rational& t = ts[i];
    if (t <= 1) throw InputError("staircase: t must exceed 1");
    StaircasePoint point;
    point.t = t;
    point.s = log(HiFloat(t)).to_double();
    Rational lo(options.gamma_low), hi(options.gamma_high);
    const Rational tol(options.tolerance);
    try {
      if (!feasible(problem, p, kind, lo, t, options)) {
        point.below_bracket = true;
        point.gamma = options.gamma_low;
      } else {
        // Upward ladder: large gamma probes are costly and rarely needed.
        bool capped = false;
        for (double step = 1.0;; step *= 2.0) {
          const bool top = step >= options.gamma_high;
          const Rational probe = top ? hi : Rational(step);
          if (probe <= lo) continue;
          if (!feasible(problem, p, kind, probe, t, options)) {
            hi = probe;
            capped = true;
            break;
          }
          lo = probe;
          if (top) break;
        }
        if (!capped) {
          point.infinite = true;
          point.gamma = options.gamma_high;
        } else {
          while (hi - lo > tol) {
            Rational mid = (lo + hi) / 2;
            (feasible(problem, p, kind, mid, t, options) ? lo : hi) = mid;
          }
          point.gamma = Rational((lo + hi) / 2).get_d();
        }
      }
    } catch (const BudgetExceeded&) {
      point = StaircasePoint{};
      point.t = t;
      point.s = log(HiFloat(t)).to_double();
      point.degenerate = true;
    }
    out[i] = std::move(point);
  });
  return out;
}

ExponentPair staircase_estimate(const std::vector<StaircasePoint>& points, double window) {
  std::vector<double> s, g;
  for (const auto& pt : points) {
    if (pt.degenerate) continue;
    s.push_back(pt.s);
    g.push_back(pt.infinite ? std::numeric_limits<double>::infinity() : pt.gamma);
  }
  const Range r = tail_range(s, g, window);
  auto wrap = [](double v) { return std::isinf(v) ? Exponent{v, true} : Exponent{v, false}; };
  return {wrap(r.high), wrap(r.low)};
}

std::vector<Rational> staircase_ts(const std::vector<GridPoint>& grid) {
  std::vector<Rational> out;
  for (const auto& g : grid) out.push_back(pow(g.u, g.scale.get_si()));
  return out;
}

}  // namespace pgn
