#pragma once

#include <cstdint>
#include <random>

#include "patdist/rational.hpp"

namespace patdist {

// Element of Z/pZ for an odd prime p < 2^63. The modulus travels with the
// value so generic polynomial code can build zeros and ones from any element.
class Fp {
 public:
  Fp() = default;
  Fp(std::uint64_t value, std::uint64_t modulus)
      : value_(value % modulus), modulus_(modulus) {}

  std::uint64_t value() const { return value_; }
  std::uint64_t modulus() const { return modulus_; }

  Fp& operator+=(const Fp& rhs) {
    value_ += rhs.value_;
    if (value_ >= modulus_) value_ -= modulus_;
    return *this;
  }
  Fp& operator-=(const Fp& rhs) {
    value_ = value_ >= rhs.value_ ? value_ - rhs.value_
                                  : value_ + modulus_ - rhs.value_;
    return *this;
  }
  Fp& operator*=(const Fp& rhs) {
    value_ = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(value_) * rhs.value_ % modulus_);
    return *this;
  }
  Fp& operator/=(const Fp& rhs) { return *this *= rhs.inverse(); }

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  Fp operator-() const { return Fp(value_ == 0 ? 0 : modulus_ - value_, modulus_); }
  friend bool operator==(const Fp& a, const Fp& b) {
    return a.value_ == b.value_ && a.modulus_ == b.modulus_;
  }

  Fp pow(std::uint64_t e) const;
  // Throws InputError for zero.
  Fp inverse() const;

 private:
  std::uint64_t value_ = 0;
  std::uint64_t modulus_ = 1;
};

inline bool is_zero(const Fp& x) { return x.value() == 0; }
inline Fp zero_like(const Fp& x) { return Fp(0, x.modulus()); }
inline Fp one_like(const Fp& x) { return Fp(1, x.modulus()); }

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m);

// Deterministic Miller-Rabin for 64-bit integers (fixed witness set that is
// exact below 2^64).
bool is_prime_u64(std::uint64_t n);

// Image of a rational modulo p; returns false when p divides the denominator.
bool reduce_mod(const BigRational& q, std::uint64_t p, Fp& out);

// Distinct primes, ascending, all >= max(2^bits, lower_bound + 1).
class PrimeStream {
 public:
  PrimeStream(unsigned bits, std::uint64_t lower_bound = 0);
  std::uint64_t next();

 private:
  std::uint64_t cursor_;
};

// Uniformly drawn start in [2^bits, 2^(bits+1)), then the next prime above it.
std::uint64_t random_prime(unsigned bits, std::mt19937_64& rng);

}  // namespace patdist
