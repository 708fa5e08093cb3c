// SPDX-License-Identifier: Apache-2.0

#include "pgn/minima.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace pgn {

Rational box_norm(const RationalVector& v, const RationalVector& half_widths) {
  if (v.size() != half_widths.size()) throw DimensionError("box_norm: length mismatch");
  Rational best(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    Rational r = abs(v[i]) / half_widths[i];
    if (r > best) best = r;
  }
  return best;
}

HiFloat box_norm(const RationalVector& v, const std::vector<HiFloat>& half_widths) {
  if (v.size() != half_widths.size()) throw DimensionError("box_norm: length mismatch");
  const mpfr_prec_t prec = half_widths.front().precision();
  HiFloat best(prec);
  bool any = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    HiFloat r = HiFloat(abs(v[i]), prec) / half_widths[i];
    if (!any || r.value() > best.value()) {
      best = r;
      any = true;
    }
  }
  return best;
}

namespace {

Real inner(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real acc(a.front().precision());
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Rough log2 of |q| for a nonzero rational.
long log2_magnitude(const Rational& q) {
  return static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) - static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

}  // namespace

std::vector<IntegerVector> lll_transform(const std::vector<std::vector<Real>>& columns, double delta) {
  const std::size_t n = columns.size();
  std::vector<IntegerVector> u(n, IntegerVector(n, Integer(0)));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  if (n <= 1) return u;
  const mpfr_prec_t prec = columns.front().front().precision();

  std::vector<std::vector<Real>> b = columns;
  std::vector<std::vector<Real>> bstar = columns;
  std::vector<std::vector<Real>> mu(n, std::vector<Real>(n, Real(prec)));
  std::vector<Real> norms(n, Real(prec));

  auto gram_schmidt_from = [&](std::size_t from) {
    for (std::size_t i = from; i < n; ++i) {
      bstar[i] = b[i];
      for (std::size_t j = 0; j < i; ++j) {
        mu[i][j] = norms[j].is_zero() ? Real(prec) : inner(b[i], bstar[j]) / norms[j];
        for (std::size_t t = 0; t < bstar[i].size(); ++t) bstar[i][t] -= mu[i][j] * bstar[j][t];
      }
      norms[i] = inner(bstar[i], bstar[i]);
    }
  };
  gram_schmidt_from(0);

  const Real half(0.5, prec);
  const Real delta_r(delta, prec);
  std::size_t k = 1;
  std::size_t iterations = 0;
  while (k < n) {
    // Iteration cap: the transform stays unimodular even if we stop early,
    // and the enumeration stage does not rely on reduction quality.
    if (++iterations > 200000) break;
    for (std::size_t jj = k; jj-- > 0;) {
      if (abs(mu[k][jj]) <= half) continue;
      Integer q = mu[k][jj].round_to_integer();
      Real qr(q, prec);
      for (std::size_t t = 0; t < b[k].size(); ++t) b[k][t] -= qr * b[jj][t];
      for (std::size_t t = 0; t < n; ++t) u[k][t] -= q * u[jj][t];
      for (std::size_t i = 0; i < jj; ++i) mu[k][i] -= qr * mu[jj][i];
      mu[k][jj] -= qr;
    }
    Real lhs = norms[k];
    Real rhs = (delta_r - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(u[k], u[k - 1]);
      gram_schmidt_from(k - 1);
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return u;
}

namespace {

struct Candidate {
  std::vector<long> reduced;  // coordinates in the reduced basis
  IntegerVector coeffs;       // in the original lattice basis, sign-normalized
  Integer scaled;             // exact mode: norm times the gauge denominator
  HiFloat norm;               // float mode
};

// Box norm of basis * c evaluated from integer data. Exact mode folds the
// half-widths and the basis denominators into one integer matrix G and one
// denominator P, so |basis c|_box = max_i |(G c)_i| / P. Float mode keeps
// integer numerators and multiplies by a bounded-error 1/(den_i h_i) only on
// the coordinates that can attain the maximum.
class Gauge {
 public:
  Gauge(const RationalMatrix& basis, const Box& box, bool exact) : dim_(basis.rows()), exact_(exact) {
    numer_ = Matrix<Integer>(dim_, dim_);
    std::vector<Integer> den(dim_, Integer(1));
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) den[i] = lcm(den[i], Integer(basis(i, j).get_den()));
      for (std::size_t j = 0; j < dim_; ++j) numer_(i, j) = Integer(basis(i, j) * den[i]);
    }
    if (exact_) {
      std::vector<Rational> q(dim_);
      denom_ = 1;
      for (std::size_t i = 0; i < dim_; ++i) {
        q[i] = den[i] * (*box.exact)[i];
        denom_ = lcm(denom_, Integer(q[i].get_num()));
      }
      for (std::size_t i = 0; i < dim_; ++i) {
        const Integer w = Integer(q[i].get_den()) * (denom_ / Integer(q[i].get_num()));
        for (std::size_t j = 0; j < dim_; ++j) numer_(i, j) *= w;
      }
    } else {
      const mpfr_prec_t prec = box.widths.front().precision();
      for (std::size_t i = 0; i < dim_; ++i) {
        inv_.push_back(HiFloat(Rational(1) / den[i], prec) / box.widths[i]);
        inv_approx_.push_back(inv_.back().value().to_long_double());
      }
    }
  }

  const Integer& denominator() const { return denom_; }

  Integer scaled(const IntegerVector& c) const {
    Integer best(0), acc;
    for (std::size_t i = 0; i < dim_; ++i) {
      acc = 0;
      for (std::size_t j = 0; j < dim_; ++j)
        if (c[j] != 0) acc += numer_(i, j) * c[j];
      if (acc < 0) acc = -acc;
      if (acc > best) best = acc;
    }
    return best;
  }

  HiFloat norm(const IntegerVector& c) const {
    std::vector<Integer> a(dim_, Integer(0));
    std::vector<long double> est(dim_);
    long double top = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j)
        if (c[j] != 0) a[i] += numer_(i, j) * c[j];
      if (a[i] < 0) a[i] = -a[i];
      est[i] = static_cast<long double>(a[i].get_d()) * inv_approx_[i];
      top = std::max(top, est[i]);
    }
    const mpfr_prec_t prec = inv_.front().precision();
    HiFloat best(prec);
    bool any = false;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (a[i] == 0 || est[i] < top * (1.0L - 1e-6L)) continue;
      HiFloat v = HiFloat(Rational(a[i]), prec) * inv_[i];
      if (!any || v.value() > best.value()) {
        best = v;
        any = true;
      }
    }
    return best;
  }

 private:
  std::size_t dim_;
  bool exact_;
  Matrix<Integer> numer_;
  Integer denom_{1};
  std::vector<HiFloat> inv_;
  std::vector<long double> inv_approx_;
};

bool canonical_sign(const IntegerVector& z) {
  for (const auto& c : z)
    if (c != 0) return c > 0;
  return false;
}

// Fincke-Pohst enumeration of all integer c with |sum_j c_j r_j|_2^2 <= radius2
// and |sum_j c_j r_j|_inf <= sup_radius. Besides the Euclidean bound each
// level uses |<b*_i, y>| <= |b*_i|_1 |y|_inf.
//
// With span_prefix = j > 0 the caller already holds r_0..r_{j-1} in the span
// of its witnesses: subtrees inside span(r_0..r_{j-1}) are skipped and each
// innermost line v + k r_0 is reduced to its sup-norm minimizers (other
// points of the line are congruent to them modulo the span).
class Enumerator {
 public:
  Enumerator(const std::vector<std::vector<long double>>& r, std::uint64_t budget)
      : n_(r.size()), budget_(budget), r_(r) {
    mu_.assign(n_, std::vector<long double>(n_, 0.0L));
    b_.assign(n_, 0.0L);
    std::vector<std::vector<long double>> bstar = r;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        long double dot = 0;
        for (std::size_t t = 0; t < r[i].size(); ++t) dot += r[i][t] * bstar[j][t];
        mu_[i][j] = dot / b_[j];
        for (std::size_t t = 0; t < r[i].size(); ++t) bstar[i][t] -= mu_[i][j] * bstar[j][t];
      }
      long double nn = 0, l1 = 0;
      for (auto x : bstar[i]) {
        nn += x * x;
        l1 += std::fabs(x);
      }
      b_[i] = nn;
      l1_ratio_.push_back(l1 / nn);
    }
  }

  std::uint64_t visited() const { return visited_; }

  void run(long double radius2, long double sup_radius, std::size_t span_prefix,
           const std::function<void(const std::vector<long>&)>& visit) {
    x_.assign(n_, 0);
    radius2_ = radius2;
    sup_radius_ = sup_radius;
    span_prefix_ = span_prefix;
    visit_ = &visit;
    descend(n_ - 1, 0.0L, true);
  }

 private:
  void count() {
    if (++visited_ > budget_) throw BudgetExceeded("successive_minima: enumeration budget exceeded");
  }

  void descend(std::size_t level, long double partial, bool zero_above) {
    if (zero_above && level < span_prefix_) return;
    long double center = 0;
    for (std::size_t j = level + 1; j < n_; ++j) center -= static_cast<long double>(x_[j]) * mu_[j][level];
    long double rem = radius2_ - partial;
    if (rem < 0) return;
    long double w = std::min(std::sqrt(rem / b_[level]), sup_radius_ * l1_ratio_[level]);
    long double lo_f = std::ceil(center - w - 1e-9L);
    long double hi_f = std::floor(center + w + 1e-9L);
    if (hi_f - lo_f > 1e12L) throw BudgetExceeded("successive_minima: enumeration interval too wide");
    if (level == 0 && span_prefix_ > 0 && collapse_line(static_cast<long>(lo_f), static_cast<long>(hi_f))) return;
    for (long v = static_cast<long>(lo_f); v <= static_cast<long>(hi_f); ++v) {
      count();
      x_[level] = v;
      long double diff = static_cast<long double>(v) - center;
      long double ps = partial + diff * diff * b_[level];
      if (ps > radius2_ * (1.0L + 1e-12L)) continue;
      if (level == 0)
        (*visit_)(x_);
      else
        descend(level - 1, ps, zero_above && v == 0);
    }
    x_[level] = 0;
  }

  // Visits the near-minimizers of |a + v r_0|_inf over v in [lo, hi]; false
  // when the minimum is too flat to isolate.
  bool collapse_line(long lo, long hi) {
    if (lo > hi) return true;
    std::vector<long double> a(r_[0].size(), 0.0L);
    for (std::size_t j = 1; j < n_; ++j) {
      if (x_[j] == 0) continue;
      for (std::size_t t = 0; t < a.size(); ++t) a[t] += static_cast<long double>(x_[j]) * r_[j][t];
    }
    auto f = [&](long v) {
      long double best = 0;
      for (std::size_t t = 0; t < a.size(); ++t) best = std::max(best, std::fabs(a[t] + static_cast<long double>(v) * r_[0][t]));
      return best;
    };
    long L = lo, H = hi;
    while (L < H) {
      const long mid = L + (H - L) / 2;
      if (f(mid + 1) >= f(mid))
        H = mid;
      else
        L = mid + 1;
    }
    const long double fb = f(L);
    const long double tol = fb * 1e-9L;
    constexpr long kMaxRun = 64;
    long first = L, last = L;
    while (first > lo && f(first - 1) <= fb + tol && L - first < kMaxRun) --first;
    while (last < hi && f(last + 1) <= fb + tol && last - L < kMaxRun) ++last;
    if (L - first >= kMaxRun || last - L >= kMaxRun) return false;
    for (long v = first; v <= last; ++v) {
      count();
      x_[0] = v;
      (*visit_)(x_);
    }
    x_[0] = 0;
    return true;
  }

  std::size_t n_;
  std::uint64_t budget_;
  std::uint64_t visited_ = 0;
  std::vector<std::vector<long double>> mu_;
  std::vector<long double> b_;
  std::vector<long double> l1_ratio_;
  std::vector<std::vector<long double>> r_;
  std::vector<long> x_;
  long double radius2_ = 0;
  long double sup_radius_ = 0;
  std::size_t span_prefix_ = 0;
  const std::function<void(const std::vector<long>&)>* visit_ = nullptr;
};


// Membership test for the span of chosen vectors: x lies in the span iff it
// is orthogonal to an integer basis of the span's orthogonal complement.
class SpanTest {
 public:
  explicit SpanTest(std::size_t dim) : dim_(dim) { rebuild(); }

  bool contains(const std::vector<long>& x) const {
    if (small_) {
      for (const auto& nrm : small_normals_) {
        __int128 acc = 0;
        for (std::size_t i = 0; i < dim_; ++i) acc += static_cast<__int128>(nrm[i]) * x[i];
        if (acc != 0) return false;
      }
      return true;
    }
    for (const auto& nrm : normals_) {
      Integer acc(0);
      for (std::size_t i = 0; i < dim_; ++i) acc += nrm[i] * x[i];
      if (acc != 0) return false;
    }
    return true;
  }

  void add(const std::vector<long>& x) {
    RationalVector row;
    for (long v : x) row.emplace_back(v);
    rows_.push_back(std::move(row));
    rebuild();
  }

 private:
  void rebuild() {
    // Reduced row echelon form of the chosen rows, then one kernel vector
    // per free column, cleared of denominators.
    std::vector<RationalVector> a = rows_;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < dim_ && rank < a.size(); ++c) {
      std::size_t p = rank;
      while (p < a.size() && a[p][c] == 0) ++p;
      if (p == a.size()) continue;
      std::swap(a[p], a[rank]);
      const Rational inv = 1 / a[rank][c];
      for (auto& v : a[rank]) v *= inv;
      for (std::size_t r = 0; r < a.size(); ++r) {
        if (r == rank || a[r][c] == 0) continue;
        const Rational f = a[r][c];
        for (std::size_t k = 0; k < dim_; ++k) a[r][k] -= f * a[rank][k];
      }
      pivots.push_back(c);
      ++rank;
    }
    normals_.clear();
    std::vector<bool> is_pivot(dim_, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < dim_; ++f) {
      if (is_pivot[f]) continue;
      RationalVector k(dim_, Rational(0));
      k[f] = 1;
      for (std::size_t r = 0; r < pivots.size(); ++r) k[pivots[r]] = -a[r][f];
      Integer den(1);
      for (const auto& v : k) den = lcm(den, Integer(v.get_den()));
      IntegerVector z;
      for (const auto& v : k) z.push_back(Integer(v * den));
      normals_.push_back(std::move(z));
    }
    // Small path: every product and sum stays far from the int128 limits.
    small_ = true;
    small_normals_.clear();
    for (const auto& z : normals_) {
      std::vector<long> w;
      for (const auto& v : z) {
        if (!v.fits_slong_p() || abs(v) > Integer(1L << 40)) {
          small_ = false;
          break;
        }
        w.push_back(v.get_si());
      }
      if (!small_) break;
      small_normals_.push_back(std::move(w));
    }
  }

  std::size_t dim_;
  std::vector<RationalVector> rows_;
  std::vector<IntegerVector> normals_;
  std::vector<std::vector<long>> small_normals_;
  bool small_ = true;
};

// When every reduced basis vector lives on its own coordinate the lattice is
// an orthogonal sum of one-dimensional pieces aligned with the box, and the
// minima are the sorted sizes of those pieces. Enumeration would visit every
// point of the largest box, which is hopeless for degenerate inputs (Theta = 0
// at large s). Witnesses are the reduced basis vectors themselves, so the
// shortcut is taken only when enumeration would be out of reach; below that
// the usual tie-break applies.
std::optional<MinimaResult> monomial_minima(const LatticeBasis& lat, const Box& box,
                                            const std::vector<RationalVector>& reduced,
                                            const std::vector<IntegerVector>& u, std::size_t want, bool exact) {
  const std::size_t dim = reduced.size();
  std::vector<bool> used(dim, false);
  std::vector<std::size_t> row_of(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::size_t support = 0, row = 0;
    for (std::size_t i = 0; i < dim; ++i)
      if (reduced[j][i] != 0) {
        ++support;
        row = i;
      }
    if (support != 1 || used[row]) return std::nullopt;
    used[row] = true;
    row_of[j] = row;
  }
  const mpfr_prec_t prec = box.widths.front().precision();
  struct Piece {
    HiFloat norm;
    Rational exact_norm;
    IntegerVector coeffs;
  };
  std::vector<Piece> pieces;
  for (std::size_t j = 0; j < dim; ++j) {
    Piece piece{HiFloat(prec), Rational(0), u[j]};
    const Rational size = abs(reduced[j][row_of[j]]);
    if (exact) {
      piece.exact_norm = size / (*box.exact)[row_of[j]];
      piece.norm = HiFloat(piece.exact_norm, prec);
    } else {
      piece.norm = HiFloat(size, prec) / box.widths[row_of[j]];
    }
    if (!canonical_sign(piece.coeffs))
      for (auto& c : piece.coeffs) c = -c;
    pieces.push_back(std::move(piece));
  }
  std::sort(pieces.begin(), pieces.end(), [&](const Piece& a, const Piece& b) {
    if (exact) {
      if (a.exact_norm != b.exact_norm) return a.exact_norm < b.exact_norm;
    } else if (!(a.norm.value() == b.norm.value())) {
      return a.norm.value() < b.norm.value();
    }
    return a.coeffs < b.coeffs;
  });
  // Lattice points in the box of radius lambda_want, roughly.
  long double points = 1;
  const long double top = pieces[want - 1].norm.value().to_long_double();
  for (const auto& piece : pieces) points *= 2 * std::floor(top / piece.norm.value().to_long_double()) + 1;
  if (points < 1e6L) return std::nullopt;

  MinimaResult result;
  result.mode = exact ? MinimaMode::exact : MinimaMode::certified_float;
  RationalVector ex;
  for (std::size_t k = 0; k < want; ++k) {
    result.lambdas.push_back(pieces[k].norm);
    result.coefficients.push_back(pieces[k].coeffs);
    result.witnesses.push_back(mat_vec(lat.basis, pieces[k].coeffs));
    ex.push_back(pieces[k].exact_norm);
  }
  if (exact) result.exact_lambdas = std::move(ex);
  return result;
}

MinimaResult finalize(MinimaResult result, const MinimaOptions& options) {
  if (options.mode == MinimaMode::certified_float) {
    double worst = 0.0;
    for (const auto& l : result.lambdas) worst = std::max(worst, l.relative_err());
    result.error_bound = worst;
    if (worst > options.eps) throw PrecisionExhausted("successive_minima: error bound exceeds requested tolerance");
  }
  return result;
}
}  // namespace

MinimaResult successive_minima(const LatticeBasis& lat, const Box& box, const MinimaOptions& options) {
  const std::size_t dim = lat.basis.rows();
  if (!lat.basis.is_square() || dim == 0) throw DimensionError("successive_minima: basis must be square");
  if (box.dim() != dim) throw DimensionError("successive_minima: box and lattice dimensions differ");
  const bool exact = options.mode == MinimaMode::exact;
  if (exact && !box.is_exact()) throw InputError("successive_minima: exact mode needs rational half-widths");
  const std::size_t want = options.count == 0 ? dim : std::min(options.count, dim);
  const mpfr_prec_t out_prec = box.widths.front().precision();

  // Working precision for reduction, from the spread of the scaled entries.
  long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
  for (std::size_t i = 0; i < dim; ++i) {
    long hexp = exact ? log2_magnitude((*box.exact)[i]) : static_cast<long>(mpfr_get_exp(box.widths[i].value().get()));
    for (std::size_t j = 0; j < dim; ++j) {
      if (lat.basis(i, j) == 0) continue;
      long e = log2_magnitude(lat.basis(i, j)) - hexp;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  const mpfr_prec_t prec = std::clamp<mpfr_prec_t>(128 + 2 * (hi - lo), 128, 1 << 16);

  auto scaled_entry = [&](const Rational& v, std::size_t row, mpfr_prec_t p) {
    if (exact) return Real(v / (*box.exact)[row], p);
    return Real(v, p) / box.widths[row].value();
  };

  std::vector<std::vector<Real>> columns(dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i) columns[j].push_back(scaled_entry(lat.basis(i, j), i, prec));
  const std::vector<IntegerVector> u = lll_transform(columns, options.lll_delta);

  // Reduced basis, exactly, plus its scaled long double image.
  std::vector<std::vector<long double>> r(dim);
  std::vector<RationalVector> reduced(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    reduced[j] = mat_vec(lat.basis, u[j]);
    for (std::size_t i = 0; i < dim; ++i) r[j].push_back(scaled_entry(reduced[j][i], i, 128).to_long_double());
  }
  if (auto direct = monomial_minima(lat, box, reduced, u, want, exact)) return finalize(std::move(*direct), options);

  const Gauge gauge(lat.basis, box, exact);
  auto evaluate = [&](Candidate& c) {
    if (exact)
      c.scaled = gauge.scaled(c.coeffs);
    else
      c.norm = gauge.norm(c.coeffs);
  };
  auto less_norm = [&](const Candidate& a, const Candidate& b) {
    if (exact) {
      if (a.scaled != b.scaled) return a.scaled < b.scaled;
    } else if (!(a.norm.value() == b.norm.value())) {
      return a.norm.value() < b.norm.value();
    }
    return a.coeffs < b.coeffs;
  };
  auto approx = [&](const Candidate& c) {
    if (exact) return static_cast<long double>(Rational(c.scaled, gauge.denominator()).get_d());
    return c.norm.value().to_long_double();
  };

  // Radius schedule: the reduced basis already supplies `want` independent
  // vectors, so its want-th smallest norm bounds lambda_want.
  std::vector<Candidate> basis_cands(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    basis_cands[j].coeffs = u[j];
    evaluate(basis_cands[j]);
  }
  std::sort(basis_cands.begin(), basis_cands.end(), less_norm);
  const Candidate cap = basis_cands[want - 1];
  Candidate radius = basis_cands.front();

  MinimaResult result;
  result.mode = options.mode;
  Enumerator enumerator(r, options.budget);

  struct Approx {
    long double norm;
    std::vector<long> x;
  };

  // Witnesses chosen at a radius are final: every lattice point within that
  // radius has been seen, so later rounds only extend the list.
  SpanTest span(dim);
  std::vector<Candidate> chosen;
  while (true) {
    std::size_t prefix = 0;
    for (; prefix < dim; ++prefix) {
      std::vector<long> unit(dim, 0);
      unit[prefix] = 1;
      if (!span.contains(unit)) break;
    }
    const long double rad = approx(radius) * (1.0L + 1e-9L);
    const long double radius2 = static_cast<long double>(dim) * rad * rad * (1.0L + 1e-6L);
    const long double sup_cut = rad * (1.0L + 1e-6L);
    std::vector<Approx> found;
    std::vector<long double> y(dim);
    enumerator.run(radius2, sup_cut, prefix, [&](const std::vector<long>& x) {
      // x and -x are both visited; keep one of them.
      std::size_t first = 0;
      while (first < dim && x[first] == 0) ++first;
      if (first == dim || x[first] < 0) return;
      std::fill(y.begin(), y.end(), 0.0L);
      for (std::size_t j = 0; j < dim; ++j) {
        if (x[j] == 0) continue;
        for (std::size_t t = 0; t < dim; ++t) y[t] += static_cast<long double>(x[j]) * r[j][t];
      }
      long double sup = 0;
      for (long double v : y) sup = std::max(sup, std::fabs(v));
      if (sup <= sup_cut) found.push_back({sup, x});
    });
    std::sort(found.begin(), found.end(), [](const Approx& a, const Approx& b) { return a.norm < b.norm; });

    // Exact work happens lazily, one group of float-indistinguishable norms
    // at a time, until enough independent witnesses are in hand.
    bool beyond = false;
    for (std::size_t i = 0; i < found.size() && chosen.size() < want && !beyond;) {
      std::size_t j = i + 1;
      while (j < found.size() && found[j].norm <= found[j - 1].norm * (1.0L + 1e-9L)) ++j;
      std::vector<Candidate> group;
      for (std::size_t g = i; g < j; ++g) {
        if (span.contains(found[g].x)) continue;
        Candidate cand;
        cand.reduced = found[g].x;
        cand.coeffs.assign(dim, Integer(0));
        for (std::size_t k = 0; k < dim; ++k) {
          if (found[g].x[k] == 0) continue;
          for (std::size_t t = 0; t < dim; ++t) cand.coeffs[t] += u[k][t] * found[g].x[k];
        }
        if (!canonical_sign(cand.coeffs))
          for (auto& c : cand.coeffs) c = -c;
        evaluate(cand);
        const bool inside = exact ? cand.scaled <= radius.scaled
                                  : cand.norm.value() <= radius.norm.value() + radius.norm.err() + cand.norm.err();
        if (!inside) {
          beyond = true;
          continue;
        }
        group.push_back(std::move(cand));
      }
      std::sort(group.begin(), group.end(), less_norm);
      for (auto& cand : group) {
        if (chosen.size() == want) break;
        if (span.contains(cand.reduced)) continue;
        span.add(cand.reduced);
        chosen.push_back(std::move(cand));
      }
      i = j;
    }
    if (chosen.size() == want) {
      RationalVector ex;
      for (const Candidate& c : chosen) {
        if (exact) {
          ex.emplace_back(c.scaled, gauge.denominator());
          ex.back().canonicalize();
          result.lambdas.emplace_back(ex.back(), out_prec);
        } else {
          result.lambdas.push_back(c.norm);
        }
        result.coefficients.push_back(c.coeffs);
        result.witnesses.push_back(mat_vec(lat.basis, c.coeffs));
      }
      if (exact) result.exact_lambdas = std::move(ex);
      break;
    }
    if (!less_norm(radius, cap) && !less_norm(cap, radius)) {
      throw Error("successive_minima: radius reached the basis bound without certification");
    }
    // Double the radius, clamped to the certified cap.
    Candidate next;
    if (exact)
      next.scaled = radius.scaled * 2;
    else
      next.norm = radius.norm * HiFloat(Rational(2), out_prec);
    radius = less_norm(next, cap) ? next : cap;
  }
  result.enumerated = enumerator.visited();

  return finalize(std::move(result), options);
}

MinimaResult compound_first_minimum(const Problem& problem, int p, const Rational& u, const Integer& scale,
                                    MinimaMode mode) {
  const LatticeBasis hat_lattice = compound_lattice(lattice(problem), p);
  const PathSpec hat = hat_path(path(problem, PathKind::standard), p);
  Box box = box_B_exact(hat, u, scale);
  if (mode == MinimaMode::certified_float) box.exact.reset();
  MinimaOptions options;
  options.mode = mode;
  options.count = 1;
  return successive_minima(hat_lattice, box, options);
}

}  // namespace pgn
