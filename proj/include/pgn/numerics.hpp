// SPDX-License-Identifier: Apache-2.0
//
// Scalar and dense linear algebra layer: exact rationals (GMP), a thin RAII
// wrapper over MPFR floats, bounded-error floats and small dense matrices.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

namespace pgn {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public Error {
 public:
  using Error::Error;
};
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};
class InputError : public Error {
 public:
  using Error::Error;
};
/// Enumeration or search exceeded its hard point budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};
/// A bounded-error float could not decide a comparison or exceeded the
/// requested error tolerance.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// Canonical num/den; throws InputError on a zero denominator.
Rational make_rational(const Integer& num, const Integer& den);
/// Accepts "p/q", "-p/q", integers and plain decimals ("0.618", "-1.5e-3").
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
Rational pow(const Rational& base, long exponent);
Rational abs(const Rational& q);
Integer lcm(const Integer& a, const Integer& b);
Integer factorial(unsigned n);

// ---------------------------------------------------------------------------
// Real: owning wrapper over mpfr_t. Binary operations round to nearest at the
// larger of the operand precisions.

class Real {
 public:
  explicit Real(mpfr_prec_t prec = kDefaultPrecision);
  Real(const Rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  Real(const Integer& z, mpfr_prec_t prec, mpfr_rnd_t rnd = MPFR_RNDN);
  Real(double v, mpfr_prec_t prec);
  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Exact value of the binary float.
  Rational to_rational() const;
  Integer round_to_integer() const;
  std::string to_string(int significant_digits = 30) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real operator-(const Real& a);
  Real& operator+=(const Real& b);
  Real& operator-=(const Real& b);

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

Real abs(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sqrt(const Real& x);

// ---------------------------------------------------------------------------
// HiFloat: a P-bit float together with a conservative bound on its absolute
// distance from the exact value it stands for.

class HiFloat {
 public:
  explicit HiFloat(mpfr_prec_t prec = kDefaultPrecision);
  HiFloat(const Rational& q, mpfr_prec_t prec = kDefaultPrecision);
  HiFloat(Real value, Real err);

  const Real& value() const { return value_; }
  const Real& err() const { return err_; }
  mpfr_prec_t precision() const { return value_.precision(); }
  double to_double() const { return value_.to_double(); }
  /// Bound on |x - exact| / |x|; infinite when x straddles zero.
  double relative_err() const;
  /// True iff q lies within [value - err, value + err].
  bool encloses(const Rational& q) const;
  std::string to_string(int significant_digits = 30) const { return value_.to_string(significant_digits); }

  friend HiFloat operator+(const HiFloat& a, const HiFloat& b);
  friend HiFloat operator-(const HiFloat& a, const HiFloat& b);
  friend HiFloat operator*(const HiFloat& a, const HiFloat& b);
  friend HiFloat operator/(const HiFloat& a, const HiFloat& b);
  friend HiFloat operator-(const HiFloat& a);
  HiFloat& operator+=(const HiFloat& b) { return *this = *this + b; }

 private:
  Real value_;
  Real err_;
};

HiFloat exp(const HiFloat& x);
HiFloat log(const HiFloat& x);
HiFloat abs(const HiFloat& x);
/// Certified comparison. Throws PrecisionExhausted when the enclosures overlap.
bool certainly_less(const HiFloat& a, const HiFloat& b);
/// -1, 0, +1 when a is certainly below, undecided, certainly above b.
int compare_certified(const HiFloat& a, const HiFloat& b);

// ---------------------------------------------------------------------------
// Dense row-major matrix.

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back((*this)(i, j));
    return out;
  }
  void set_column(std::size_t j, const std::vector<T>& v) {
    if (v.size() != rows_) throw DimensionError("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

RationalMatrix identity_matrix(std::size_t n);
RationalMatrix transpose(const RationalMatrix& a);

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionError("mat_mul: inner dimensions differ");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T acc = a(i, 0) * b(0, j);
      for (std::size_t k = 1; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

RationalVector mat_vec(const RationalMatrix& a, const RationalVector& x);
RationalVector mat_vec(const RationalMatrix& a, const IntegerVector& x);
Rational dot(const RationalVector& a, const RationalVector& b);

RationalMatrix mat_inverse(const RationalMatrix& a);
Rational det(const RationalMatrix& a);
/// Rank over Q.
std::size_t rank(const RationalMatrix& a);

/// Incremental exact independence test for a growing family of vectors.
class IndependenceTracker {
 public:
  explicit IndependenceTracker(std::size_t dim) : dim_(dim) {}
  /// Adds v if it is independent of the vectors accepted so far.
  bool try_add(const IntegerVector& v);
  bool try_add(const RationalVector& v);
  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t dim_;
  std::vector<RationalVector> rows_;  // echelon form
  std::vector<std::size_t> pivots_;
};

}  // namespace pgn
