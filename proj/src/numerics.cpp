// SPDX-License-Identifier: Apache-2.0

#include "pgn/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace pgn {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw InputError("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw InputError("malformed integer '" + std::string(s) + "'");
  Integer z(std::string(s), 10);
  return neg ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw InputError("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    Integer ez = parse_integer(text.substr(e + 1));
    if (!ez.fits_slong_p() || abs(ez) > 100000) throw InputError("exponent out of range in '" + std::string(text) + "'");
    exponent = ez.get_si();
  }
  bool neg = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    neg = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mantissa.substr(0, dot);
    std::string_view fp = mantissa.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      throw InputError("malformed decimal '" + std::string(text) + "'");
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(mantissa)) throw InputError("malformed number '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  Integer num(digits, 10);
  if (neg) num = -num;
  long shift = exponent - frac_len;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  return shift >= 0 ? make_rational(num * ten_pow, 1) : make_rational(num, ten_pow);
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow(const Rational& base, long exponent) {
  Rational b = exponent < 0 ? Rational(1) / base : base;
  unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), e);
  return make_rational(num, den);
}

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer factorial(unsigned n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

// ---------------------------------------------------------------------------
// Real

Real::Real(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Real::Real(const Rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  mpfr_init2(v_, prec);
  mpfr_set_q(v_, q.get_mpq_t(), rnd);
}

Real::Real(const Integer& z, mpfr_prec_t prec, mpfr_rnd_t rnd) {
  mpfr_init2(v_, prec);
  mpfr_set_z(v_, z.get_mpz_t(), rnd);
}

Real::Real(double v, mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(v_, other.precision());
  mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

Rational Real::to_rational() const {
  if (!mpfr_number_p(v_)) throw PrecisionExhausted("non-finite float");
  Rational q;
  mpfr_get_q(q.get_mpq_t(), v_);
  return q;
}

Integer Real::round_to_integer() const {
  if (!mpfr_number_p(v_)) throw PrecisionExhausted("non-finite float");
  Integer z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

std::string Real::to_string(int significant_digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", std::max(0, significant_digits - 1), v_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

namespace {
mpfr_prec_t joint(const Real& a, const Real& b) { return std::max(a.precision(), b.precision()); }
}  // namespace

Real operator+(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(joint(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}
Real& Real::operator+=(const Real& b) { return *this = *this + b; }
Real& Real::operator-=(const Real& b) { return *this = *this - b; }

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------------------
// HiFloat. Error terms are accumulated in 64-bit floats rounded upward.

namespace {

constexpr mpfr_prec_t kErrPrecision = 64;

// Upper bound on the rounding error of a correctly rounded (RNDN) result r.
Real rounding_bound(const Real& r) {
  Real e(kErrPrecision);
  if (r.is_zero()) return e;
  mpfr_abs(e.get(), r.get(), MPFR_RNDU);
  mpfr_mul_2si(e.get(), e.get(), -static_cast<long>(r.precision()) + 1, MPFR_RNDU);
  return e;
}

Real add_up(const Real& a, const Real& b) {
  Real r(kErrPrecision);
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

Real mul_up(const Real& a, const Real& b) {
  Real r(kErrPrecision);
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU);
  return r;
}

Real abs_up(const Real& a) {
  Real r(kErrPrecision);
  mpfr_abs(r.get(), a.get(), MPFR_RNDU);
  return r;
}

}  // namespace

HiFloat::HiFloat(mpfr_prec_t prec) : value_(prec), err_(kErrPrecision) {}

HiFloat::HiFloat(const Rational& q, mpfr_prec_t prec) : value_(q, prec), err_(kErrPrecision) {
  // mpfr_set_q is correctly rounded, so half an ulp bounds the error.
  err_ = rounding_bound(value_);
}

HiFloat::HiFloat(Real value, Real err) : value_(std::move(value)), err_(std::move(err)) {
  if (err_.sign() < 0) throw Error("HiFloat: negative error bound");
}

double HiFloat::relative_err() const {
  Real a = abs_up(value_);
  if (a <= err_) return std::numeric_limits<double>::infinity();
  Real r(kErrPrecision);
  mpfr_div(r.get(), err_.get(), a.get(), MPFR_RNDU);
  return mpfr_get_d(r.get(), MPFR_RNDU);
}

bool HiFloat::encloses(const Rational& q) const {
  Real lo(value_.precision() + 8), hi(value_.precision() + 8);
  mpfr_sub(lo.get(), value_.get(), err_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), value_.get(), err_.get(), MPFR_RNDU);
  return mpfr_cmp_q(lo.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi.get(), q.get_mpq_t()) >= 0;
}

HiFloat operator+(const HiFloat& a, const HiFloat& b) {
  Real v = a.value_ + b.value_;
  Real e = add_up(add_up(a.err_, b.err_), rounding_bound(v));
  return HiFloat(std::move(v), std::move(e));
}

HiFloat operator-(const HiFloat& a, const HiFloat& b) {
  Real v = a.value_ - b.value_;
  Real e = add_up(add_up(a.err_, b.err_), rounding_bound(v));
  return HiFloat(std::move(v), std::move(e));
}

HiFloat operator-(const HiFloat& a) { return HiFloat(-a.value_, a.err_); }

HiFloat operator*(const HiFloat& a, const HiFloat& b) {
  Real v = a.value_ * b.value_;
  Real e = add_up(mul_up(abs_up(a.value_), b.err_), mul_up(abs_up(b.value_), a.err_));
  e = add_up(e, mul_up(a.err_, b.err_));
  e = add_up(e, rounding_bound(v));
  return HiFloat(std::move(v), std::move(e));
}

HiFloat operator/(const HiFloat& a, const HiFloat& b) {
  Real bmag = abs_up(b.value_);
  Real margin(kErrPrecision);
  mpfr_abs(margin.get(), b.value_.get(), MPFR_RNDD);
  mpfr_sub(margin.get(), margin.get(), b.err_.get(), MPFR_RNDD);
  if (margin.sign() <= 0) throw PrecisionExhausted("HiFloat division by an enclosure containing zero");
  Real v = a.value_ / b.value_;
  // |a/b - A/B| <= (|a| eb + |b| ea) / (|b| (|b| - eb))
  Real num = add_up(mul_up(abs_up(a.value_), b.err_), mul_up(bmag, a.err_));
  Real den(kErrPrecision);
  mpfr_abs(den.get(), b.value_.get(), MPFR_RNDD);
  mpfr_mul(den.get(), den.get(), margin.get(), MPFR_RNDD);
  Real e(kErrPrecision);
  mpfr_div(e.get(), num.get(), den.get(), MPFR_RNDU);
  e = add_up(e, rounding_bound(v));
  return HiFloat(std::move(v), std::move(e));
}

HiFloat exp(const HiFloat& x) {
  Real v = exp(x.value());
  // |e^{x+d} - e^x| <= e^x (e^{|d|} - 1), and e^x <= |v| + rb(v).
  Real rb = rounding_bound(v);
  Real grow(kErrPrecision);
  mpfr_expm1(grow.get(), x.err().get(), MPFR_RNDU);
  Real e = add_up(mul_up(add_up(abs_up(v), rb), grow), rb);
  return HiFloat(std::move(v), std::move(e));
}

HiFloat log(const HiFloat& x) {
  Real margin(kErrPrecision);
  mpfr_sub(margin.get(), x.value().get(), x.err().get(), MPFR_RNDD);
  if (margin.sign() <= 0) throw PrecisionExhausted("HiFloat log of an enclosure reaching zero");
  Real v = log(x.value());
  // |ln(x+d) - ln x| <= |d| / (x - |d|)
  Real e(kErrPrecision);
  mpfr_div(e.get(), x.err().get(), margin.get(), MPFR_RNDU);
  e = add_up(e, rounding_bound(v));
  return HiFloat(std::move(v), std::move(e));
}

HiFloat abs(const HiFloat& x) { return HiFloat(abs(x.value()), x.err()); }

int compare_certified(const HiFloat& a, const HiFloat& b) {
  HiFloat diff = a - b;
  Real mag = abs_up(diff.value());
  if (mag <= diff.err()) return 0;
  return diff.value().sign() < 0 ? -1 : 1;
}

bool certainly_less(const HiFloat& a, const HiFloat& b) {
  int c = compare_certified(a, b);
  if (c == 0) throw PrecisionExhausted("comparison undecided at current precision");
  return c < 0;
}

// ---------------------------------------------------------------------------
// Matrices

RationalMatrix identity_matrix(std::size_t n) {
  RationalMatrix id(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1;
  return id;
}

RationalMatrix transpose(const RationalMatrix& a) {
  RationalMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

RationalVector mat_vec(const RationalMatrix& a, const RationalVector& x) {
  if (a.cols() != x.size()) throw DimensionError("mat_vec: length mismatch");
  RationalVector out(a.rows(), Rational(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (x[j] != 0) out[i] += a(i, j) * x[j];
  return out;
}

RationalVector mat_vec(const RationalMatrix& a, const IntegerVector& x) {
  if (a.cols() != x.size()) throw DimensionError("mat_vec: length mismatch");
  RationalVector out(a.rows(), Rational(0));
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (x[j] == 0) continue;
    Rational xj(x[j]);
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0) out[i] += a(i, j) * xj;
  }
  return out;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  Rational acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

RationalMatrix mat_inverse(const RationalMatrix& a) {
  if (!a.is_square()) throw DimensionError("mat_inverse: matrix is not square");
  const std::size_t n = a.rows();
  RationalMatrix work = a;
  RationalMatrix inv = identity_matrix(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && work(piv, col) == 0) ++piv;
    if (piv == n) throw SingularMatrixError("mat_inverse: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(piv, j), work(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    }
    Rational scale = 1 / work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || work(i, col) == 0) continue;
      Rational f = work(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        work(i, j) -= f * work(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Rational det(const RationalMatrix& a) {
  if (!a.is_square()) throw DimensionError("det: matrix is not square");
  const std::size_t n = a.rows();
  if (n == 0) return Rational(1);
  RationalMatrix work = a;
  Rational result(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && work(piv, col) == 0) ++piv;
    if (piv == n) return Rational(0);
    if (piv != col) {
      for (std::size_t j = col; j < n; ++j) std::swap(work(piv, j), work(col, j));
      result = -result;
    }
    result *= work(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (work(i, col) == 0) continue;
      Rational f = work(i, col) / work(col, col);
      for (std::size_t j = col; j < n; ++j) work(i, j) -= f * work(col, j);
    }
  }
  return result;
}

std::size_t rank(const RationalMatrix& a) {
  IndependenceTracker tracker(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) tracker.try_add(a.column(j));
  return tracker.rank();
}

bool IndependenceTracker::try_add(const IntegerVector& v) {
  RationalVector r;
  r.reserve(v.size());
  for (const auto& z : v) r.emplace_back(z);
  return try_add(r);
}

bool IndependenceTracker::try_add(const RationalVector& v) {
  if (v.size() != dim_) throw DimensionError("IndependenceTracker: length mismatch");
  RationalVector r = v;
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const std::size_t p = pivots_[k];
    if (r[p] == 0) continue;
    Rational f = r[p] / rows_[k][p];
    for (std::size_t j = 0; j < dim_; ++j)
      if (rows_[k][j] != 0) r[j] -= f * rows_[k][j];
  }
  auto it = std::find_if(r.begin(), r.end(), [](const Rational& x) { return x != 0; });
  if (it == r.end()) return false;
  pivots_.push_back(static_cast<std::size_t>(it - r.begin()));
  rows_.push_back(std::move(r));
  return true;
}

}  // namespace pgn
