#include <gmpxx.h>

#include <random>

#include "doctest.h"
#include "patdist/error.hpp"
#include "patdist/ext_float.hpp"
#include "patdist/poly.hpp"
#include "patdist/prime_field.hpp"
#include "patdist/rational.hpp"
#include "patdist/reconstruct.hpp"

using namespace patdist;

namespace {

BigRational q(const char* s) { return parse_rational(s); }

std::vector<BigRational> series_of(const std::vector<BigRational>& num,
                                   const std::vector<BigRational>& den, std::size_t terms) {
  // Naive division: s_k = (num_k - sum_{i>=1} den_i s_{k-i}) / den_0.
  std::vector<BigRational> s(terms);
  for (std::size_t k = 0; k < terms; ++k) {
    BigRational acc = k < num.size() ? num[k] : BigRational(0);
    for (std::size_t i = 1; i < den.size() && i <= k; ++i) acc -= den[i] * s[k - i];
    s[k] = acc / den[0];
  }
  return s;
}

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(to_string(q("6/4")) == "3/2");
  CHECK(to_string(q("-7")) == "-7");
  CHECK(to_string(q("0/5")) == "0");
  CHECK_THROWS_AS(q("1/0"), InputError);
  CHECK_THROWS_AS(q("1/"), InputError);
  CHECK_THROWS_AS(q("a"), InputError);
  CHECK(bit_size(q("255/2")) == 8);
}

TEST_CASE("prime field arithmetic") {
  const std::uint64_t p = 97;
  Fp a(65, p), three(3, p);
  CHECK((a * three).value() == 1);
  CHECK(three.inverse() == a);
  CHECK(Fp(5, p).pow(96) == Fp(1, p));
  CHECK_THROWS_AS(Fp(0, p).inverse(), InputError);
  Fp r;
  CHECK(reduce_mod(q("1/3"), p, r));
  CHECK(r.value() == 65);
  CHECK_FALSE(reduce_mod(q("1/97"), p, r));
}

TEST_CASE("prime stream yields ascending primes above the bound") {
  PrimeStream s(5);
  CHECK(s.next() == 37);
  CHECK(s.next() == 41);
  CHECK(s.next() == 43);
  PrimeStream big(31);
  std::uint64_t prev = 0;
  for (int i = 0; i < 50; ++i) {
    const std::uint64_t p = big.next();
    CHECK(p > prev);
    CHECK(p >= (std::uint64_t{1} << 31));
    CHECK(mpz_probab_prime_p(mpz_class(static_cast<unsigned long>(p)).get_mpz_t(), 64) > 0);
    prev = p;
  }
}

TEST_CASE("Miller-Rabin agrees with GMP on a range") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t n = rng() >> (rng() % 60);
    const bool gmp = mpz_probab_prime_p(mpz_class(static_cast<unsigned long>(n)).get_mpz_t(), 64) > 0;
    CHECK(is_prime_u64(n) == gmp);
  }
  // Strong pseudoprimes to small bases.
  CHECK_FALSE(is_prime_u64(3215031751ULL));
  CHECK_FALSE(is_prime_u64(3825123056546413051ULL));
}

TEST_CASE("CRT") {
  CHECK(crt_combine({{2, 3}, {3, 5}}) == 8);
  CrtAccumulator acc;
  acc.add(1, 6);
  CHECK_THROWS_AS(acc.add(1, 9), InputError);

  std::mt19937_64 rng(3);
  PrimeStream primes(31);
  mpz_class x("123456789012345678901234567890");
  std::vector<Residue> res;
  mpz_class m = 1;
  while (m <= x) {
    const std::uint64_t p = primes.next();
    res.push_back({mpz_fdiv_ui(x.get_mpz_t(), p), p});
    m *= static_cast<unsigned long>(p);
  }
  CHECK(crt_combine(res) == x);
}

TEST_CASE("rational reconstruction") {
  CHECK(rational_reconstruct(65, 97) == q("1/3"));
  CHECK_THROWS_AS(rational_reconstruct(10, 97), ReconstructionError);
  // Round trip of random fractions with a large modulus.
  std::mt19937_64 rng(11);
  mpz_class m = 1;
  PrimeStream primes(61);
  for (int i = 0; i < 4; ++i) m *= static_cast<unsigned long>(primes.next());
  for (int i = 0; i < 100; ++i) {
    BigRational f(static_cast<long>(rng() % 2000000) - 1000000,
                  static_cast<unsigned long>(rng() % 1000000 + 1));
    f.canonicalize();
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), f.get_den().get_mpz_t(), m.get_mpz_t());
    mpz_class x = f.get_num() * inv;
    mpz_class xr;
    mpz_fdiv_r(xr.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    CHECK(rational_reconstruct(xr, m) == f);
  }
}

TEST_CASE("fraction reconstruction of known series") {
  const BigRational zero(0);
  SUBCASE("geometric") {
    std::vector<BigRational> s(3, BigRational(1));
    auto f = fraction_reconstruct(s, 1);
    CHECK(f.numerator == DensePoly<BigRational>({BigRational(1)}, zero));
    CHECK(f.denominator == DensePoly<BigRational>({BigRational(1), BigRational(-1)}, zero));
  }
  SUBCASE("1/(1-z)^2") {
    std::vector<BigRational> s = {1, 2, 3, 4, 5};
    auto f = fraction_reconstruct(s, 2);
    CHECK(f.numerator.degree() == 0);
    CHECK(f.denominator == DensePoly<BigRational>({1, -2, 1}, zero));
  }
  SUBCASE("Fibonacci") {
    std::vector<BigRational> s = {0, 1, 1, 2, 3};
    auto f = fraction_reconstruct(s, 2);
    CHECK(f.numerator == DensePoly<BigRational>({0, 1}, zero));
    CHECK(f.denominator == DensePoly<BigRational>({1, -1, -1}, zero));
  }
  SUBCASE("random fractions modulo a prime") {
    std::mt19937_64 rng(5);
    const std::uint64_t p = 1000003;
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t d = 1 + rng() % 6;
      std::vector<Fp> a(d + 1), b(d);
      a[0] = Fp(1, p);
      for (std::size_t i = 1; i <= d; ++i) a[i] = Fp(rng(), p);
      for (auto& c : b) c = Fp(rng(), p);
      std::vector<Fp> s(2 * d + 1, Fp(0, p));
      for (std::size_t k = 0; k < s.size(); ++k) {
        Fp acc = k < b.size() ? b[k] : Fp(0, p);
        for (std::size_t i = 1; i <= d && i <= k; ++i) acc -= a[i] * s[k - i];
        s[k] = acc;
      }
      auto f = fraction_reconstruct(s, d);
      // B/A reproduces the series to the order used.
      DensePoly<Fp> prod = f.denominator * DensePoly<Fp>(s, Fp(0, p));
      CHECK(prod.truncated(2 * d + 1) == f.numerator.truncated(2 * d + 1));
      CHECK(f.denominator.coeff(0) == Fp(1, p));
      CHECK(f.denominator.degree() <= static_cast<long>(d));
    }
  }
}

TEST_CASE("fraction reconstruction agrees with naive series division") {
  std::vector<BigRational> num = {q("1/2"), q("-3/7")};
  std::vector<BigRational> den = {1, q("-5/9"), q("1/11"), q("2/3")};
  auto s = series_of(num, den, 7);
  auto f = fraction_reconstruct(s, 3);
  CHECK(f.denominator == DensePoly<BigRational>(den, BigRational(0)));
  CHECK(f.numerator == DensePoly<BigRational>(num, BigRational(0)));
}

TEST_CASE("interpolation") {
  const std::uint64_t p = 101;
  std::vector<std::pair<Fp, Fp>> pts = {
      {Fp(0, p), Fp(1, p)}, {Fp(1, p), Fp(2, p)}, {Fp(2, p), Fp(5, p)}};
  auto poly = interpolate(pts);
  CHECK(poly == DensePoly<Fp>({Fp(1, p), Fp(0, p), Fp(1, p)}, Fp(0, p)));
  pts.push_back({Fp(1, p), Fp(3, p)});
  CHECK_THROWS_AS(interpolate(pts), InputError);
}

TEST_CASE("extended float tracks exact rationals") {
  std::mt19937_64 rng(9);
  BigRational exact(1);
  ExtFloat approx = ExtFloat::from_long(1);
  for (int i = 0; i < 500; ++i) {
    BigRational f(static_cast<long>(rng() % 1000 + 1), static_cast<unsigned long>(rng() % 1000 + 1));
    f.canonicalize();
    if (i % 3 == 0) {
      exact += f;
      approx += ExtFloat(f, ExtFloat::kDefaultPrecision);
    } else {
      exact *= f;
      approx *= ExtFloat(f, ExtFloat::kDefaultPrecision);
    }
  }
  ExtFloat rel = relative_difference(approx, ExtFloat(exact, ExtFloat::kDefaultPrecision));
  CHECK(rel < ExtFloat::from_double(1e-290));
  CHECK(ExtFloat(q("1/3"), 64).to_string(6) == "3.33333e-01");
  ExtFloat tiny = pow(ExtFloat::from_double(0.5), mpz_class(1000000));
  CHECK(tiny.sign() > 0);
  CHECK(tiny.to_string(3) == "1.01e-301030");
}
