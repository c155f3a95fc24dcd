#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace patdist {

// GMP keeps mpq_class canonical (gcd(num, den) = 1, den > 0) after every
// arithmetic operation, which is exactly the BigRational invariant.
using BigInt = mpz_class;
using BigRational = mpq_class;

// Parses "n", "-n" or "n/d" in base 10. Throws InputError on malformed text or
// a zero denominator.
BigRational parse_rational(std::string_view text);

// Reduced "n/d" form; integers print without the "/1".
std::string to_string(const BigRational& q);

// Bit length of the larger of |numerator| and denominator.
std::size_t bit_size(const BigRational& q);

inline bool is_zero(const BigRational& q) { return sgn(q) == 0; }
inline BigRational zero_like(const BigRational&) { return BigRational(0); }
inline BigRational one_like(const BigRational&) { return BigRational(1); }

inline bool is_zero(const BigInt& x) { return sgn(x) == 0; }
inline BigInt zero_like(const BigInt&) { return BigInt(0); }
inline BigInt one_like(const BigInt&) { return BigInt(1); }

}  // namespace patdist
