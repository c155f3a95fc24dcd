#pragma once

#include <mpfr.h>

#include <compare>
#include <string>

#include "patdist/rational.hpp"

namespace patdist {

// Extended-precision binary float backed by MPFR. Every value carries its own
// mantissa precision; binary operations round to the larger of the two
// operand precisions, so precision is a property of the data rather than of
// any global state.
class ExtFloat {
 public:
  static constexpr mpfr_prec_t kDefaultPrecision = 1024;

  explicit ExtFloat(mpfr_prec_t precision = kDefaultPrecision);
  ExtFloat(const BigRational& q, mpfr_prec_t precision);
  static ExtFloat from_double(double x, mpfr_prec_t precision = kDefaultPrecision);
  static ExtFloat from_long(long x, mpfr_prec_t precision = kDefaultPrecision);

  ExtFloat(const ExtFloat& other);
  ExtFloat(ExtFloat&& other) noexcept;
  ExtFloat& operator=(const ExtFloat& other);
  ExtFloat& operator=(ExtFloat&& other) noexcept;
  ~ExtFloat();

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  // Unit roundoff 2^(1 - precision).
  ExtFloat epsilon() const;

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }

  // Scientific notation with `digits` significant digits, e.g. 9.12559e-02.
  std::string to_string(int digits = 6) const;

  ExtFloat& operator+=(const ExtFloat& rhs);
  ExtFloat& operator-=(const ExtFloat& rhs);
  ExtFloat& operator*=(const ExtFloat& rhs);
  ExtFloat& operator/=(const ExtFloat& rhs);
  ExtFloat& operator*=(const BigRational& rhs);
  ExtFloat& operator/=(unsigned long rhs);

  // this += a * b with a single rounding.
  void add_mul(const ExtFloat& a, const ExtFloat& b);
  // this -= a * b with a single rounding.
  void sub_mul(const ExtFloat& a, const ExtFloat& b);

  void set_zero() { mpfr_set_zero(value_, 1); }
  void assign(const ExtFloat& other) { mpfr_set(value_, other.value_, MPFR_RNDN); }

  friend ExtFloat operator+(ExtFloat a, const ExtFloat& b) { return a += b; }
  friend ExtFloat operator-(ExtFloat a, const ExtFloat& b) { return a -= b; }
  friend ExtFloat operator*(ExtFloat a, const ExtFloat& b) { return a *= b; }
  friend ExtFloat operator/(ExtFloat a, const ExtFloat& b) { return a /= b; }
  ExtFloat operator-() const;

  friend bool operator==(const ExtFloat& a, const ExtFloat& b) {
    return mpfr_equal_p(a.value_, b.value_) != 0;
  }
  friend std::partial_ordering operator<=>(const ExtFloat& a, const ExtFloat& b);

  friend ExtFloat abs(const ExtFloat& x);
  friend ExtFloat log(const ExtFloat& x);
  friend ExtFloat exp(const ExtFloat& x);
  friend ExtFloat pow(const ExtFloat& base, const BigInt& exponent);

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

inline bool is_zero(const ExtFloat& x) { return x.is_zero(); }
inline ExtFloat zero_like(const ExtFloat& x) { return ExtFloat(x.precision()); }
inline ExtFloat one_like(const ExtFloat& x) {
  return ExtFloat::from_long(1, x.precision());
}

// |a - b| / |b|, or |a| when b is zero.
ExtFloat relative_difference(const ExtFloat& a, const ExtFloat& b);

}  // namespace patdist
