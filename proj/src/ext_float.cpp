#include "patdist/ext_float.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <vector>

#include "patdist/error.hpp"

namespace patdist {

namespace {

void widen_to(mpfr_ptr target, mpfr_srcptr other) {
  if (mpfr_get_prec(other) > mpfr_get_prec(target)) {
    mpfr_prec_round(target, mpfr_get_prec(other), MPFR_RNDN);
  }
}

}  // namespace

ExtFloat::ExtFloat(mpfr_prec_t precision) {
  if (precision < MPFR_PREC_MIN || precision > MPFR_PREC_MAX) {
    throw InputError("invalid float precision " + std::to_string(precision));
  }
  mpfr_init2(value_, precision);
  mpfr_set_zero(value_, 1);
}

ExtFloat::ExtFloat(const BigRational& q, mpfr_prec_t precision)
    : ExtFloat(precision) {
  mpfr_set_q(value_, q.get_mpq_t(), MPFR_RNDN);
}

ExtFloat ExtFloat::from_double(double x, mpfr_prec_t precision) {
  ExtFloat r(precision);
  mpfr_set_d(r.value_, x, MPFR_RNDN);
  return r;
}

ExtFloat ExtFloat::from_long(long x, mpfr_prec_t precision) {
  ExtFloat r(precision);
  mpfr_set_si(r.value_, x, MPFR_RNDN);
  return r;
}

ExtFloat::ExtFloat(const ExtFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

ExtFloat::ExtFloat(ExtFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

ExtFloat& ExtFloat::operator=(const ExtFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

ExtFloat& ExtFloat::operator=(ExtFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

ExtFloat::~ExtFloat() { mpfr_clear(value_); }

ExtFloat ExtFloat::epsilon() const {
  ExtFloat r(precision());
  mpfr_set_ui_2exp(r.value_, 1, 1 - precision(), MPFR_RNDN);
  return r;
}

std::string ExtFloat::to_string(int digits) const {
  digits = std::max(digits, 1);
  const int n = mpfr_snprintf(nullptr, 0, "%.*Re", digits - 1, value_);
  std::vector<char> buf(static_cast<std::size_t>(n) + 1);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, value_);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

ExtFloat& ExtFloat::operator+=(const ExtFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtFloat& ExtFloat::operator-=(const ExtFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtFloat& ExtFloat::operator*=(const ExtFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtFloat& ExtFloat::operator/=(const ExtFloat& rhs) {
  widen_to(value_, rhs.value_);
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}

ExtFloat& ExtFloat::operator*=(const BigRational& rhs) {
  mpfr_mul_q(value_, value_, rhs.get_mpq_t(), MPFR_RNDN);
  return *this;
}

ExtFloat& ExtFloat::operator/=(unsigned long rhs) {
  mpfr_div_ui(value_, value_, rhs, MPFR_RNDN);
  return *this;
}

void ExtFloat::add_mul(const ExtFloat& a, const ExtFloat& b) {
  mpfr_fma(value_, a.value_, b.value_, value_, MPFR_RNDN);
}

void ExtFloat::sub_mul(const ExtFloat& a, const ExtFloat& b) {
  // value - a*b = -(a*b - value)
  mpfr_fms(value_, a.value_, b.value_, value_, MPFR_RNDN);
  mpfr_neg(value_, value_, MPFR_RNDN);
}

ExtFloat ExtFloat::operator-() const {
  ExtFloat r(*this);
  mpfr_neg(r.value_, r.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const ExtFloat& a, const ExtFloat& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

ExtFloat abs(const ExtFloat& x) {
  ExtFloat r(x);
  mpfr_abs(r.value_, r.value_, MPFR_RNDN);
  return r;
}

ExtFloat log(const ExtFloat& x) {
  ExtFloat r(x.precision());
  mpfr_log(r.value_, x.value_, MPFR_RNDN);
  return r;
}

ExtFloat exp(const ExtFloat& x) {
  ExtFloat r(x.precision());
  mpfr_exp(r.value_, x.value_, MPFR_RNDN);
  return r;
}

ExtFloat pow(const ExtFloat& base, const BigInt& exponent) {
  ExtFloat r(base.precision());
  mpfr_pow_z(r.value_, base.value_, exponent.get_mpz_t(), MPFR_RNDN);
  return r;
}

ExtFloat relative_difference(const ExtFloat& a, const ExtFloat& b) {
  ExtFloat diff = abs(a - b);
  if (b.is_zero()) return diff;
  return diff / abs(b);
}

}  // namespace patdist
