// SPDX-License-Identifier: Apache-2.0
//
// Objects attached to a real n x m matrix Theta: the vectors l_i, the
// unipotent matrix T = [[E_m, 0], [Theta, E_n]], the lattices T^{-1} Z^d and
// its dual T^t Z^d, diagonal paths and the parallelepipeds used to read off
// Diophantine exponents from successive minima.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgn/exterior.hpp"
#include "pgn/numerics.hpp"

namespace pgn {

struct Problem {
  int m = 0;
  int n = 0;
  RationalMatrix theta;  // n rows, m columns
  int precision_digits = 0;  // informational: digits of the source truncation

  int d() const { return m + n; }
};

/// Validates shapes; throws DimensionError when theta is not n x m.
Problem build_problem(int m, int n, RationalMatrix theta, int precision_digits = 0);
/// The problem for Theta^t (or -Theta^t when `negate`), with m and n swapped.
Problem transposed(const Problem& problem, bool negate = false);

/// Largest s = ln t for which t^{1 + gamma_max} stays below sqrt(q), q the
/// smallest denominator among non-integer entries of Theta (q = 1 if none).
/// Past this horizon a truncated Theta behaves like the rational it is.
double horizon_budget(const Problem& problem, const Rational& gamma_max);
double horizon_budget(const Problem& problem);  // gamma_max = m/n

RationalMatrix ell_matrix(const Problem& problem);
/// Columns l_1..l_d of [[E_m, -Theta^t], [Theta, E_n]].
std::vector<RationalVector> ell_vectors(const Problem& problem);
RationalMatrix t_matrix(const Problem& problem);

struct LatticeBasis {
  RationalMatrix basis;  // columns generate the lattice
  std::string label;

  std::size_t dim() const { return basis.rows(); }
};

LatticeBasis lattice(const Problem& problem);       // T^{-1} Z^d
LatticeBasis dual_lattice(const Problem& problem);  // T^t Z^d
LatticeBasis integer_lattice(int d);
/// wedge^p of a lattice, generated by the p-th compound of its basis.
LatticeBasis compound_lattice(const LatticeBasis& lat, int p);

/// l_{i1} ^ ... ^ l_{ik}; sigma must lie in {0..m-1}. Empty sigma gives 1.
Multivector L_sigma(const Problem& problem, const Subset& sigma);
/// e_{i1} ^ ... ^ e_{ik}; sigma must lie in {m..d-1}. Empty sigma gives 1.
Multivector E_sigma(const Problem& problem, const Subset& sigma);
/// Wedge of l_i over an arbitrary index set (used by the Hodge transfer).
Multivector ell_wedge(const Problem& problem, const Subset& indices);

enum class PathKind { standard, starred, custom };

struct PathSpec {
  PathKind kind = PathKind::standard;
  RationalVector rates;  // tau(s) = rates * s, sum zero
};

PathSpec path(const Problem& problem, PathKind kind);
PathSpec custom_path(RationalVector rates);
PathSpec hat_path(const PathSpec& base, int p);
/// Smallest positive integer L with L * rate integral for every rate. On the
/// exact grid s = L ln u every half-width e^{rate s} = u^{L rate} is rational.
Integer path_scale(const PathSpec& spec);
const char* to_string(PathKind kind);
PathKind parse_path_kind(const std::string& name);

/// Axis-aligned symmetric parallelepiped. `widths` always holds bounded-error
/// values; `exact` is present when every half-width is rational.
struct Box {
  std::vector<HiFloat> widths;
  std::optional<RationalVector> exact;

  std::size_t dim() const { return widths.size(); }
  bool is_exact() const { return exact.has_value(); }
};

Box make_box(const RationalVector& half_widths, mpfr_prec_t prec = kDefaultPrecision);
Box make_box(std::vector<HiFloat> half_widths);
/// Replaces every half-width by the exact value of its float approximation.
Box rationalized(const Box& box);
Box scaled(const Box& box, const Rational& c);

/// B(s) on the exact grid s = scale * ln u, u > 1 rational.
Box box_B_exact(const PathSpec& spec, const Rational& u, const Integer& scale, mpfr_prec_t prec = kDefaultPrecision);
/// B(s) for arbitrary s; half-widths carry rounding bounds.
Box box_B(const PathSpec& spec, const HiFloat& s);

/// Half-widths are t^{e_i}; these return the exponents e_i.
RationalVector box_P_exponents(const Problem& problem, const Rational& gamma);
RationalVector box_P_hat_exponents(const Problem& problem, int p, const Rational& gamma);
/// Exact when every t^{e_i} is rational, bounded-error floats otherwise.
Box box_from_exponents(const RationalVector& exponents, const Rational& t, mpfr_prec_t prec = kDefaultPrecision);
Box box_P(const Problem& problem, const Rational& gamma, const Rational& t, mpfr_prec_t prec = kDefaultPrecision);
Box box_P_hat(const Problem& problem, int p, const Rational& gamma, const Rational& t,
              mpfr_prec_t prec = kDefaultPrecision);
/// t^e exactly, if rational.
std::optional<Rational> exact_power(const Rational& t, const Rational& e);

/// min(p, m(d-p)/n)
Rational kappa(int m, int n, int p);
/// min(p, n(d-p)/m)
Rational kappa_star(int m, int n, int p);
/// min(d-p, m p/n)
Rational kappa_star_star(int m, int n, int p);
/// k0 = max(0, m-p), k1 = min(m, d-p)
int k_low(int m, int n, int p);
int k_high(int m, int n, int p);
/// d / (n kappa) - 1: the gamma at which P_hat_gamma(t) is the hat-path box.
Rational gamma_zero(int m, int n, int p);

}  // namespace pgn
