// SPDX-License-Identifier: Apache-2.0

#include "pgn/exterior.hpp"

#include <algorithm>
#include <stdexcept>

namespace pgn {

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

std::size_t subset_rank(std::span<const int> members, int d) {
  const int k = static_cast<int>(members.size());
  std::size_t rank = 0;
  int prev = -1;
  for (int pos = 0; pos < k; ++pos) {
    const int m = members[static_cast<std::size_t>(pos)];
    if (m <= prev || m >= d) throw std::out_of_range("subset_rank: members must be increasing within [0, d)");
    // Count subsets that agree on the prefix and carry a smaller element here.
    for (int c = prev + 1; c < m; ++c) rank += binomial(d - c - 1, k - pos - 1);
    prev = m;
  }
  return rank;
}

Subset subset_unrank(std::size_t rank, int k, int d) {
  if (k < 0 || k > d || rank >= binomial(d, k)) throw std::out_of_range("subset_unrank: rank out of range");
  Subset out;
  int c = 0;
  for (int pos = 0; pos < k; ++pos) {
    while (true) {
      std::size_t block = binomial(d - c - 1, k - pos - 1);
      if (rank < block) break;
      rank -= block;
      ++c;
    }
    out.push_back(c++);
  }
  return out;
}

std::vector<Subset> subsets_of(const Subset& ground, int k) {
  std::vector<Subset> out;
  const int n = static_cast<int>(ground.size());
  if (k < 0 || k > n) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    Subset s;
    for (int i : idx) s.push_back(ground[static_cast<std::size_t>(i)]);
    out.push_back(std::move(s));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<Subset> all_subsets(int d, int k) {
  Subset ground(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) ground[static_cast<std::size_t>(i)] = i;
  return subsets_of(ground, k);
}

Subset complement(const Subset& s, int d) {
  Subset out;
  for (int i = 0; i < d; ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) out.push_back(i);
  return out;
}

int merge_sign(std::span<const int> a, std::span<const int> b) {
  std::size_t inversions = 0;
  for (int x : a) {
    for (int y : b) {
      if (x == y) return 0;
      if (x > y) ++inversions;
    }
  }
  return inversions % 2 == 0 ? 1 : -1;
}

// ---------------------------------------------------------------------------

Multivector::Multivector(int d, int grade) : d_(d), p_(grade) {
  if (d < 0 || grade < 0 || grade > d) throw DimensionError("Multivector: grade out of range");
  coeffs_.assign(binomial(d, grade), Rational(0));
}

Multivector::Multivector(int d, int grade, RationalVector coeffs) : Multivector(d, grade) {
  if (coeffs.size() != coeffs_.size()) throw DimensionError("Multivector: coefficient count must be C(d, p)");
  coeffs_ = std::move(coeffs);
}

Multivector Multivector::scalar(int d, const Rational& value) { return Multivector(d, 0, {value}); }

Multivector Multivector::basis(int d, const Subset& members) {
  Multivector out(d, static_cast<int>(members.size()));
  out.coeffs_[subset_rank(members, d)] = 1;
  return out;
}

Multivector Multivector::from_vector(const RationalVector& v) {
  return Multivector(static_cast<int>(v.size()), 1, v);
}

bool Multivector::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c == 0; });
}

Multivector operator+(const Multivector& a, const Multivector& b) {
  if (a.d_ != b.d_ || a.p_ != b.p_) throw DimensionError("Multivector +: shape mismatch");
  Multivector out = a;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
  return out;
}

Multivector operator-(const Multivector& a, const Multivector& b) {
  if (a.d_ != b.d_ || a.p_ != b.p_) throw DimensionError("Multivector -: shape mismatch");
  Multivector out = a;
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] -= b.coeffs_[i];
  return out;
}

Multivector operator*(const Rational& c, const Multivector& a) {
  Multivector out = a;
  for (auto& x : out.coeffs_) x *= c;
  return out;
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim()) throw DimensionError("wedge: ambient dimensions differ");
  const int d = a.dim();
  if (a.grade() + b.grade() > d) throw DimensionError("wedge: grade exceeds dimension");
  Multivector out(d, a.grade() + b.grade());
  const auto sa = all_subsets(d, a.grade());
  const auto sb = all_subsets(d, b.grade());
  Subset merged;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < sb.size(); ++j) {
      if (b[j] == 0) continue;
      int sign = merge_sign(sa[i], sb[j]);
      if (sign == 0) continue;
      merged.clear();
      std::merge(sa[i].begin(), sa[i].end(), sb[j].begin(), sb[j].end(), std::back_inserter(merged));
      Rational term = a[i] * b[j];
      if (sign > 0)
        out[subset_rank(merged, d)] += term;
      else
        out[subset_rank(merged, d)] -= term;
    }
  }
  return out;
}

Multivector permute(const Multivector& z, const std::vector<int>& perm) {
  const int d = z.dim();
  if (static_cast<int>(perm.size()) != d) throw DimensionError("permute: permutation length differs from dimension");
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || v >= d || seen[static_cast<std::size_t>(v)]) throw DimensionError("permute: not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
  Multivector out(d, z.grade());
  const auto subsets = all_subsets(d, z.grade());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (z[i] == 0) continue;
    Subset image;
    for (int k : subsets[i]) image.push_back(perm[static_cast<std::size_t>(k)]);
    int sign = 1;  // parity of the sort, by counting inversions
    for (std::size_t a = 0; a < image.size(); ++a)
      for (std::size_t b = a + 1; b < image.size(); ++b)
        if (image[a] > image[b]) sign = -sign;
    std::sort(image.begin(), image.end());
    if (sign > 0)
      out[subset_rank(image, d)] += z[i];
    else
      out[subset_rank(image, d)] -= z[i];
  }
  return out;
}

Multivector hodge_star(const Multivector& z) {
  const int d = z.dim();
  Multivector out(d, d - z.grade());
  const auto subsets = all_subsets(d, z.grade());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (z[i] == 0) continue;
    Subset comp = complement(subsets[i], d);
    // e_sigma ^ *e_sigma = e_1 ^ ... ^ e_d
    int sign = merge_sign(subsets[i], comp);
    out[subset_rank(comp, d)] = sign > 0 ? z[i] : Rational(-z[i]);
  }
  return out;
}

Rational sup_norm(const Multivector& z) {
  Rational best(0);
  for (const auto& c : z.coeffs()) best = std::max(best, abs(c));
  return best;
}

RationalMatrix compound_matrix(const RationalMatrix& a, int p) {
  if (!a.is_square()) throw DimensionError("compound_matrix: matrix is not square");
  const int d = static_cast<int>(a.rows());
  if (p < 0 || p > d) throw DimensionError("compound_matrix: grade out of range");
  const auto subsets = all_subsets(d, p);
  const std::size_t r = subsets.size();
  RationalMatrix out(r, r);
  RationalMatrix minor(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v)
          minor(static_cast<std::size_t>(u), static_cast<std::size_t>(v)) =
              a(static_cast<std::size_t>(subsets[i][static_cast<std::size_t>(u)]),
                static_cast<std::size_t>(subsets[j][static_cast<std::size_t>(v)]));
      out(i, j) = det(minor);
    }
  }
  return out;
}

}  // namespace pgn
