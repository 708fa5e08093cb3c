// SPDX-License-Identifier: Apache-2.0
//
// Exterior algebra over R^d in the basis e_{i1} ^ ... ^ e_{ik}, i1 < ... < ik,
// with k-subsets of {0, ..., d-1} ordered lexicographically. All indices and
// ranks here are 0-based.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pgn/numerics.hpp"

namespace pgn {

using Subset = std::vector<int>;

std::size_t binomial(int n, int k);

/// Lexicographic rank of a strictly increasing subset of {0..d-1}.
std::size_t subset_rank(std::span<const int> members, int d);
/// Inverse of subset_rank; throws std::out_of_range for rank >= C(d, k).
Subset subset_unrank(std::size_t rank, int k, int d);
/// All k-subsets of {0..d-1} in lexicographic order.
std::vector<Subset> all_subsets(int d, int k);
/// All k-subsets of an arbitrary strictly increasing ground set.
std::vector<Subset> subsets_of(const Subset& ground, int k);
Subset complement(const Subset& s, int d);
/// Sign of the permutation that sorts the concatenation (a, b); 0 if they
/// share an element.
int merge_sign(std::span<const int> a, std::span<const int> b);

class Multivector {
 public:
  Multivector(int d, int grade);
  Multivector(int d, int grade, RationalVector coeffs);
  static Multivector scalar(int d, const Rational& value);
  static Multivector basis(int d, const Subset& members);
  static Multivector from_vector(const RationalVector& v);

  int dim() const { return d_; }
  int grade() const { return p_; }
  std::size_t size() const { return coeffs_.size(); }
  const RationalVector& coeffs() const { return coeffs_; }
  const Rational& operator[](std::size_t rank) const { return coeffs_[rank]; }
  Rational& operator[](std::size_t rank) { return coeffs_[rank]; }
  const Rational& at(const Subset& members) const { return coeffs_[subset_rank(members, d_)]; }
  bool is_zero() const;

  friend Multivector operator+(const Multivector& a, const Multivector& b);
  friend Multivector operator-(const Multivector& a, const Multivector& b);
  friend Multivector operator*(const Rational& c, const Multivector& a);
  friend bool operator==(const Multivector& a, const Multivector& b) = default;

 private:
  int d_;
  int p_;
  RationalVector coeffs_;
};

Multivector wedge(const Multivector& a, const Multivector& b);
/// Image under the coordinate permutation e_i -> e_{perm[i]}.
Multivector permute(const Multivector& z, const std::vector<int>& perm);
Multivector hodge_star(const Multivector& z);
Rational sup_norm(const Multivector& z);

/// Entry (i, j) is the minor of `a` on rows sigma_i and columns sigma_j.
RationalMatrix compound_matrix(const RationalMatrix& a, int p);

/// tau_hat_j = sum of tau_i over i in sigma_j.
template <class T>
std::vector<T> hat_tau(const std::vector<T>& tau, int p) {
  const int d = static_cast<int>(tau.size());
  std::vector<T> out;
  for (const auto& s : all_subsets(d, p)) {
    T acc = T(0);
    for (int i : s) acc += tau[static_cast<std::size_t>(i)];
    out.push_back(acc);
  }
  return out;
}

}  // namespace pgn
