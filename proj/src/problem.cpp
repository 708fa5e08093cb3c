// SPDX-License-Identifier: Apache-2.0

#include "pgn/problem.hpp"

#include <algorithm>
#include <cmath>

namespace pgn {

Problem build_problem(int m, int n, RationalMatrix theta, int precision_digits) {
  if (m < 1 || n < 1) throw DimensionError("build_problem: m and n must be positive");
  if (theta.rows() != static_cast<std::size_t>(n) || theta.cols() != static_cast<std::size_t>(m))
    throw DimensionError("build_problem: theta must be " + std::to_string(n) + " x " + std::to_string(m) + ", got " +
                         std::to_string(theta.rows()) + " x " + std::to_string(theta.cols()));
  return Problem{m, n, std::move(theta), precision_digits};
}

Problem transposed(const Problem& problem, bool negate) {
  RationalMatrix t = transpose(problem.theta);
  if (negate)
    for (std::size_t i = 0; i < t.rows(); ++i)
      for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = -t(i, j);
  return build_problem(problem.n, problem.m, std::move(t), problem.precision_digits);
}

double horizon_budget(const Problem& problem, const Rational& gamma_max) {
  Integer scale = 0;
  for (std::size_t i = 0; i < problem.theta.rows(); ++i) {
    for (std::size_t j = 0; j < problem.theta.cols(); ++j) {
      const Integer& den = problem.theta(i, j).get_den();
      if (den == 1) continue;
      if (scale == 0 || den < scale) scale = den;
    }
  }
  if (scale == 0) return 0.0;
  double ln_scale = std::log(mpz_get_d(scale.get_mpz_t()));
  if (!std::isfinite(ln_scale)) {
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, scale.get_mpz_t());
    ln_scale = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
  }
  return ln_scale / (2.0 * (1.0 + gamma_max.get_d()));
}

double horizon_budget(const Problem& problem) {
  return horizon_budget(problem, make_rational(problem.m, problem.n));
}

RationalMatrix ell_matrix(const Problem& problem) {
  const auto m = static_cast<std::size_t>(problem.m);
  const auto d = static_cast<std::size_t>(problem.d());
  RationalMatrix l(d, d, Rational(0));
  for (std::size_t i = 0; i < d; ++i) l(i, i) = 1;
  for (std::size_t i = 0; i < static_cast<std::size_t>(problem.n); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      l(m + i, j) = problem.theta(i, j);    // Theta block
      l(j, m + i) = -problem.theta(i, j);   // -Theta^t block
    }
  }
  return l;
}

std::vector<RationalVector> ell_vectors(const Problem& problem) {
  RationalMatrix l = ell_matrix(problem);
  std::vector<RationalVector> out;
  for (std::size_t j = 0; j < l.cols(); ++j) out.push_back(l.column(j));
  return out;
}

RationalMatrix t_matrix(const Problem& problem) {
  const auto m = static_cast<std::size_t>(problem.m);
  RationalMatrix t = identity_matrix(static_cast<std::size_t>(problem.d()));
  for (std::size_t i = 0; i < static_cast<std::size_t>(problem.n); ++i)
    for (std::size_t j = 0; j < m; ++j) t(m + i, j) = problem.theta(i, j);
  return t;
}

LatticeBasis lattice(const Problem& problem) { return {mat_inverse(t_matrix(problem)), "Lambda"}; }

LatticeBasis dual_lattice(const Problem& problem) { return {transpose(t_matrix(problem)), "Lambda*"}; }

LatticeBasis integer_lattice(int d) { return {identity_matrix(static_cast<std::size_t>(d)), "Z^d"}; }

LatticeBasis compound_lattice(const LatticeBasis& lat, int p) {
  return {compound_matrix(lat.basis, p), "wedge^" + std::to_string(p) + "(" + lat.label + ")"};
}

Multivector ell_wedge(const Problem& problem, const Subset& indices) {
  const int d = problem.d();
  RationalMatrix l = ell_matrix(problem);
  Multivector acc = Multivector::scalar(d, 1);
  for (int i : indices) {
    if (i < 0 || i >= d) throw DimensionError("ell_wedge: index out of range");
    acc = wedge(acc, Multivector::from_vector(l.column(static_cast<std::size_t>(i))));
  }
  return acc;
}

Multivector L_sigma(const Problem& problem, const Subset& sigma) {
  for (int i : sigma)
    if (i < 0 || i >= problem.m) throw DimensionError("L_sigma: index outside {0..m-1}");
  return ell_wedge(problem, sigma);
}

Multivector E_sigma(const Problem& problem, const Subset& sigma) {
  for (int i : sigma)
    if (i < problem.m || i >= problem.d()) throw DimensionError("E_sigma: index outside {m..d-1}");
  if (sigma.empty()) return Multivector::scalar(problem.d(), 1);
  return Multivector::basis(problem.d(), sigma);
}

// ---------------------------------------------------------------------------
// Paths

PathSpec path(const Problem& problem, PathKind kind) {
  PathSpec spec{kind, {}};
  const Rational mn = make_rational(problem.m, problem.n);
  const Rational nm = make_rational(problem.n, problem.m);
  for (int i = 0; i < problem.d(); ++i) {
    const bool head = i < problem.m;
    switch (kind) {
      case PathKind::standard:
        spec.rates.push_back(head ? Rational(1) : Rational(-mn));
        break;
      case PathKind::starred:
        spec.rates.push_back(head ? Rational(-nm) : Rational(1));
        break;
      case PathKind::custom:
        throw InputError("path: custom paths are built with custom_path()");
    }
  }
  return spec;
}

PathSpec custom_path(RationalVector rates) {
  Rational sum(0);
  for (const auto& r : rates) sum += r;
  if (sum != 0) throw InputError("custom_path: rates must sum to zero");
  return {PathKind::custom, std::move(rates)};
}

PathSpec hat_path(const PathSpec& base, int p) { return {PathKind::custom, hat_tau(base.rates, p)}; }

Integer path_scale(const PathSpec& spec) {
  Integer l = 1;
  for (const auto& r : spec.rates) l = lcm(l, r.get_den());
  return l;
}

const char* to_string(PathKind kind) {
  switch (kind) {
    case PathKind::standard: return "standard";
    case PathKind::starred: return "starred";
    case PathKind::custom: return "custom";
  }
  return "?";
}

PathKind parse_path_kind(const std::string& name) {
  if (name == "standard") return PathKind::standard;
  if (name == "starred") return PathKind::starred;
  throw InputError("unknown path kind '" + name + "' (expected standard or starred)");
}

// ---------------------------------------------------------------------------
// Boxes

Box make_box(const RationalVector& half_widths, mpfr_prec_t prec) {
  Box box;
  for (const auto& h : half_widths) {
    if (h <= 0) throw InputError("make_box: half-widths must be positive");
    box.widths.emplace_back(h, prec);
  }
  box.exact = half_widths;
  return box;
}

Box make_box(std::vector<HiFloat> half_widths) {
  for (const auto& h : half_widths)
    if (compare_certified(h, HiFloat(Rational(0), h.precision())) <= 0)
      throw InputError("make_box: half-widths must be certifiably positive");
  return Box{std::move(half_widths), std::nullopt};
}

Box rationalized(const Box& box) {
  if (box.is_exact()) return box;
  RationalVector q;
  for (const auto& h : box.widths) q.push_back(h.value().to_rational());
  return make_box(q, box.widths.front().precision());
}

Box scaled(const Box& box, const Rational& c) {
  if (c <= 0) throw InputError("scaled: factor must be positive");
  if (box.is_exact()) {
    RationalVector q = *box.exact;
    for (auto& h : q) h *= c;
    return make_box(q, box.widths.front().precision());
  }
  std::vector<HiFloat> w;
  for (const auto& h : box.widths) w.push_back(h * HiFloat(c, h.precision()));
  return make_box(std::move(w));
}

Box box_B_exact(const PathSpec& spec, const Rational& u, const Integer& scale, mpfr_prec_t prec) {
  if (u <= 1) throw InputError("box_B_exact: grid point u must exceed 1");
  RationalVector widths;
  for (const auto& rate : spec.rates) {
    Rational e = rate * Rational(scale);
    if (e.get_den() != 1) throw InputError("box_B_exact: scale does not clear the rate denominators");
    widths.push_back(pow(u, e.get_num().get_si()));
  }
  return make_box(widths, prec);
}

Box box_B(const PathSpec& spec, const HiFloat& s) {
  std::vector<HiFloat> widths;
  for (const auto& rate : spec.rates) widths.push_back(exp(HiFloat(rate, s.precision()) * s));
  return make_box(std::move(widths));
}

RationalVector box_P_exponents(const Problem& problem, const Rational& gamma) {
  RationalVector e;
  for (int i = 0; i < problem.d(); ++i) e.push_back(i < problem.m ? Rational(1) : Rational(-gamma));
  return e;
}

RationalVector box_P_hat_exponents(const Problem& problem, int p, const Rational& gamma) {
  const int d = problem.d();
  if (p < 1 || p > d) throw DimensionError("box_P_hat: grade out of range");
  const int k0 = k_low(problem.m, problem.n, p);
  RationalVector e;
  for (const auto& s : all_subsets(d, p)) {
    // sigma_j meets {0..m-1} in m - k elements
    const int head = static_cast<int>(std::count_if(s.begin(), s.end(), [&](int i) { return i < problem.m; }));
    const int k = problem.m - head;
    e.push_back(Rational(1) - Rational(k - k0) * (Rational(1) + gamma));
  }
  return e;
}

std::optional<Rational> exact_power(const Rational& t, const Rational& e) {
  if (t <= 0) return std::nullopt;
  const Integer& a = e.get_num();
  const Integer& b = e.get_den();
  if (!a.fits_slong_p() || !b.fits_ulong_p()) return std::nullopt;
  Rational base = t;
  if (b != 1) {
    Integer rn, rd;
    const unsigned long bb = b.get_ui();
    if (mpz_root(rn.get_mpz_t(), t.get_num_mpz_t(), bb) == 0) return std::nullopt;
    if (mpz_root(rd.get_mpz_t(), t.get_den_mpz_t(), bb) == 0) return std::nullopt;
    base = make_rational(rn, rd);
  }
  if (abs(a) > 100000) return std::nullopt;
  return pow(base, a.get_si());
}

Box box_from_exponents(const RationalVector& exponents, const Rational& t, mpfr_prec_t prec) {
  if (t <= 0) throw InputError("box: t must be positive");
  RationalVector exact;
  bool all_exact = true;
  for (const auto& e : exponents) {
    auto v = exact_power(t, e);
    if (!v) {
      all_exact = false;
      break;
    }
    exact.push_back(*v);
  }
  if (all_exact) return make_box(exact, prec);

  const HiFloat ln_t = log(HiFloat(t, prec));
  std::vector<HiFloat> widths;
  for (const auto& e : exponents) {
    HiFloat arg = HiFloat(e, prec) * ln_t;
    if (std::abs(arg.to_double()) > 1e8) throw Error("box: exponent overflows the float range");
    widths.push_back(exp(arg));
  }
  return make_box(std::move(widths));
}

Box box_P(const Problem& problem, const Rational& gamma, const Rational& t, mpfr_prec_t prec) {
  return box_from_exponents(box_P_exponents(problem, gamma), t, prec);
}

Box box_P_hat(const Problem& problem, int p, const Rational& gamma, const Rational& t, mpfr_prec_t prec) {
  return box_from_exponents(box_P_hat_exponents(problem, p, gamma), t, prec);
}

Rational kappa(int m, int n, int p) {
  const int d = m + n;
  return std::min(Rational(p), make_rational(m * (d - p), n));
}

Rational kappa_star(int m, int n, int p) {
  const int d = m + n;
  return std::min(Rational(p), make_rational(n * (d - p), m));
}

Rational kappa_star_star(int m, int n, int p) {
  const int d = m + n;
  return std::min(Rational(d - p), make_rational(m * p, n));
}

int k_low(int m, int /*n*/, int p) { return std::max(0, m - p); }
int k_high(int m, int n, int p) { return std::min(m, m + n - p); }

Rational gamma_zero(int m, int n, int p) {
  return Rational(m + n) / (Rational(n) * kappa(m, n, p)) - 1;
}

}  // namespace pgn
