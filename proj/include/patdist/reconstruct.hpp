#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "patdist/error.hpp"
#include "patdist/poly.hpp"
#include "patdist/prime_field.hpp"
#include "patdist/rational.hpp"

namespace patdist {

struct Residue {
  std::uint64_t value;
  std::uint64_t modulus;
};

// Incremental Chinese remaindering (Garner form): after add(r_i, p_i) for all
// i, value() is the unique x in [0, prod p_i) with x = r_i mod p_i.
class CrtAccumulator {
 public:
  CrtAccumulator() : value_(0), modulus_(1) {}

  // Throws InputError when p shares a factor with the current modulus.
  void add(std::uint64_t residue, std::uint64_t p);

  const BigInt& value() const { return value_; }
  const BigInt& modulus() const { return modulus_; }

 private:
  BigInt value_;
  BigInt modulus_;
};

// x with x = value_i (mod modulus_i) for all i and 0 <= x < prod modulus_i.
BigInt crt_combine(const std::vector<Residue>& residues);

// Classical half-bound (Wang) reconstruction: n/d with n = d*x (mod m),
// |n| <= sqrt(m/2), 0 < d <= sqrt(m/2), gcd(d, m) = 1. Returns nullopt when
// no such fraction exists.
std::optional<BigRational> try_rational_reconstruct(const BigInt& x, const BigInt& m);

// Same, throwing ReconstructionError on failure.
BigRational rational_reconstruct(const BigInt& x, const BigInt& m);

template <typename R>
DensePoly<R> poly_gcd(DensePoly<R> a, DensePoly<R> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) a *= one_like(a.leading()) / a.leading();
  return a;
}

template <typename R>
struct PolyFraction {
  DensePoly<R> numerator;
  DensePoly<R> denominator;
};

// Pade-type reconstruction of a truncated power series: returns B/A with
// deg B <= d, deg A <= d, A(0) = 1, gcd(B, A) = 1 and B = A * series
// (mod z^(2d+1)). Runs the extended Euclidean algorithm on (z^(2d+1), series)
// and stops at the first remainder of degree <= d.
template <typename R>
PolyFraction<R> fraction_reconstruct(const std::vector<R>& series, std::size_t d) {
  if (series.size() < 2 * d + 1) {
    throw InputError("fraction reconstruction needs 2d+1 = " + std::to_string(2 * d + 1) +
                     " terms, got " + std::to_string(series.size()));
  }
  const R zero = zero_like(series.front());
  const R one = one_like(series.front());
  DensePoly<R> r0 = DensePoly<R>::monomial(one, 2 * d + 1);
  DensePoly<R> r1(std::vector<R>(series.begin(), series.begin() + 2 * d + 1), zero);
  DensePoly<R> t0(zero);
  DensePoly<R> t1(std::vector<R>{one}, zero);
  while (r1.degree() > static_cast<long>(d)) {
    auto [q, r] = divmod(r0, r1);
    DensePoly<R> t = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (is_zero(t1.coeff(0))) {
    throw ReconstructionError("degenerate fraction: reconstructed denominator vanishes at 0");
  }
  DensePoly<R> g = poly_gcd(r1, t1);
  if (g.degree() > 0) {
    r1 = divmod(r1, g).first;
    t1 = divmod(t1, g).first;
  }
  const R scale = one / t1.coeff(0);
  r1 *= scale;
  t1 *= scale;
  return {std::move(r1), std::move(t1)};
}

// Newton interpolation: the unique polynomial of degree < points.size()
// through (x_j, v_j). Throws InputError on a repeated abscissa.
template <typename R>
DensePoly<R> interpolate(const std::vector<std::pair<R, R>>& points) {
  if (points.empty()) throw InputError("interpolation needs at least one point");
  const std::size_t n = points.size();
  const R zero = zero_like(points.front().second);
  std::vector<R> dd;
  dd.reserve(n);
  for (const auto& p : points) dd.push_back(p.second);
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = n - 1; i >= level; --i) {
      R dx = points[i].first - points[i - level].first;
      if (is_zero(dx)) throw InputError("interpolation: repeated abscissa");
      dd[i] = (dd[i] - dd[i - 1]) / dx;
    }
  }
  // Horner on the Newton basis.
  DensePoly<R> result(std::vector<R>{dd[n - 1]}, zero);
  for (std::size_t i = n - 1; i-- > 0;) {
    DensePoly<R> lin(std::vector<R>{-points[i].first, one_like(zero)}, zero);
    result = result * lin + DensePoly<R>(std::vector<R>{dd[i]}, zero);
  }
  return result;
}

}  // namespace patdist
