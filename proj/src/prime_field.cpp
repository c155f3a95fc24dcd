#include "patdist/prime_field.hpp"

#include <algorithm>
#include <array>

#include "patdist/error.hpp"

namespace patdist {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e != 0) {
    if (e & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1U;
  }
  return result;
}

Fp Fp::pow(std::uint64_t e) const { return Fp(pow_mod(value_, e, modulus_), modulus_); }

Fp Fp::inverse() const {
  if (value_ == 0) throw InputError("inverse of zero modulo " + std::to_string(modulus_));
  return pow(modulus_ - 2);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::array<std::uint64_t, 12> kWitnesses = {
      2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t w : kWitnesses) {
    if (n % w == 0) return n == w;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : kWitnesses) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool reduce_mod(const BigRational& q, std::uint64_t p, Fp& out) {
  const std::uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), p);
  if (den == 0) return false;
  const std::uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), p);
  out = Fp(num, p) * Fp(den, p).inverse();
  return true;
}

PrimeStream::PrimeStream(unsigned bits, std::uint64_t lower_bound) {
  if (bits < 2 || bits > 62) {
    throw InputError("prime bit size must lie in [2, 62], got " + std::to_string(bits));
  }
  cursor_ = std::max<std::uint64_t>(std::uint64_t{1} << bits, lower_bound + 1);
}

std::uint64_t PrimeStream::next() {
  while (!is_prime_u64(cursor_)) ++cursor_;
  return cursor_++;
}

std::uint64_t random_prime(unsigned bits, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(std::uint64_t{1} << bits,
                                                    (std::uint64_t{1} << (bits + 1)) - 1);
  return PrimeStream(bits, dist(rng) - 1).next();
}

}  // namespace patdist
