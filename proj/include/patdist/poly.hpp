#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "patdist/rational.hpp"

namespace patdist {

namespace detail {
template <typename R>
bool coeff_is_zero(const R& x) {
  return is_zero(x);
}
}  // namespace detail

// Coefficient rings used here (BigRational, ExtFloat, Fp, TruncPoly<...>)
// provide free functions is_zero, zero_like and one_like; the "like" forms
// carry per-value context such as a modulus or a float precision.

// Dense univariate polynomial c_0 + c_1 x + ... ; the coefficient vector never
// ends with a zero, so the zero polynomial has no coefficients and degree -1.
template <typename R>
class DensePoly {
 public:
  explicit DensePoly(R zero) : zero_(std::move(zero)) {}
  DensePoly(std::vector<R> coeffs, R zero) : coeffs_(std::move(coeffs)), zero_(std::move(zero)) {
    trim();
  }

  static DensePoly monomial(const R& c, std::size_t k) {
    std::vector<R> v(k + 1, zero_like(c));
    v[k] = c;
    return DensePoly(std::move(v), zero_like(c));
  }

  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<R>& coeffs() const { return coeffs_; }
  const R& zero() const { return zero_; }
  const R& coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : zero_; }
  const R& leading() const {
    if (coeffs_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return coeffs_.back();
  }

  R operator()(const R& x) const {
    R acc = zero_;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
  }

  DensePoly& operator+=(const DensePoly& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), zero_);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
    trim();
    return *this;
  }
  DensePoly& operator-=(const DensePoly& rhs) {
    if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), zero_);
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
    trim();
    return *this;
  }
  DensePoly& operator*=(const R& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
  friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
  friend DensePoly operator*(DensePoly a, const R& s) { return a *= s; }
  friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
    if (a.is_zero() || b.is_zero()) return DensePoly(a.zero_);
    std::vector<R> out(a.coeffs_.size() + b.coeffs_.size() - 1, a.zero_);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return DensePoly(std::move(out), a.zero_);
  }
  friend bool operator==(const DensePoly& a, const DensePoly& b) { return a.coeffs_ == b.coeffs_; }

  // Keeps the terms of degree < n.
  DensePoly truncated(std::size_t n) const {
    std::vector<R> v(coeffs_.begin(), coeffs_.begin() + std::min(n, coeffs_.size()));
    return DensePoly(std::move(v), zero_);
  }

 private:
  void trim() {
    while (!coeffs_.empty() && detail::coeff_is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<R> coeffs_;
  R zero_;
};

// Euclidean division over a field; divisor must be nonzero.
template <typename R>
std::pair<DensePoly<R>, DensePoly<R>> divmod(const DensePoly<R>& num, const DensePoly<R>& den) {
  if (den.is_zero()) throw std::domain_error("polynomial division by zero");
  const R& zero = num.zero();
  if (num.degree() < den.degree()) return {DensePoly<R>(zero), num};
  std::vector<R> rem = num.coeffs();
  const std::size_t dd = static_cast<std::size_t>(den.degree());
  std::vector<R> quo(rem.size() - dd, zero);
  const R inv_lead = one_like(den.leading()) / den.leading();
  for (std::size_t k = quo.size(); k-- > 0;) {
    const R q = rem[k + dd] * inv_lead;
    quo[k] = q;
    if (is_zero(q)) continue;
    for (std::size_t i = 0; i <= dd; ++i) rem[k + i] -= q * den.coeffs()[i];
  }
  rem.resize(dd, zero);
  return {DensePoly<R>(std::move(quo), zero), DensePoly<R>(std::move(rem), zero)};
}

// Element of R[y]/(y^(n+1)): always exactly n+1 coefficients.
template <typename R>
class TruncPoly {
 public:
  TruncPoly(std::size_t order, const R& zero) : c_(order + 1, zero) {}
  explicit TruncPoly(std::vector<R> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::logic_error("TruncPoly needs at least one coefficient");
  }

  // Truncation order n: coefficients of y^0..y^n are kept.
  std::size_t order() const { return c_.size() - 1; }
  const R& operator[](std::size_t k) const { return c_[k]; }
  R& operator[](std::size_t k) { return c_[k]; }
  const std::vector<R>& coeffs() const { return c_; }

  TruncPoly& operator+=(const TruncPoly& rhs) {
    check(rhs);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += rhs.c_[k];
    return *this;
  }
  TruncPoly& operator-=(const TruncPoly& rhs) {
    check(rhs);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= rhs.c_[k];
    return *this;
  }
  TruncPoly& operator*=(const TruncPoly& rhs) { return *this = *this * rhs; }

  friend TruncPoly operator+(TruncPoly a, const TruncPoly& b) { return a += b; }
  friend TruncPoly operator-(TruncPoly a, const TruncPoly& b) { return a -= b; }
  TruncPoly operator-() const {
    TruncPoly r(*this);
    for (auto& c : r.c_) c = -c;
    return r;
  }
  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
    a.check(b);
    const std::size_t n = a.c_.size();
    // Skip the zero prefix of each operand; shifted y-polynomials are common.
    std::size_t va = 0, vb = 0;
    while (va < n && is_zero(a.c_[va])) ++va;
    while (vb < n && is_zero(b.c_[vb])) ++vb;
    TruncPoly out(n - 1, zero_like(a.c_[0]));
    for (std::size_t i = va; i < n; ++i) {
      if (is_zero(a.c_[i])) continue;
      for (std::size_t j = vb; i + j < n; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return out;
  }
  friend bool operator==(const TruncPoly& a, const TruncPoly& b) { return a.c_ == b.c_; }

 private:
  void check(const TruncPoly& rhs) const {
    if (rhs.c_.size() != c_.size()) throw std::logic_error("TruncPoly order mismatch");
  }

  std::vector<R> c_;
};

template <typename R>
bool is_zero(const TruncPoly<R>& p) {
  for (const auto& c : p.coeffs()) {
    if (!is_zero(c)) return false;
  }
  return true;
}
template <typename R>
TruncPoly<R> zero_like(const TruncPoly<R>& p) {
  return TruncPoly<R>(p.order(), zero_like(p[0]));
}
template <typename R>
TruncPoly<R> one_like(const TruncPoly<R>& p) {
  TruncPoly<R> r(p.order(), zero_like(p[0]));
  r[0] = one_like(p[0]);
  return r;
}

}  // namespace patdist
