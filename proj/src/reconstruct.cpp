#include "patdist/reconstruct.hpp"

namespace patdist {

void CrtAccumulator::add(std::uint64_t residue, std::uint64_t p) {
  if (p < 2) throw InputError("CRT modulus must be at least 2");
  const std::uint64_t m_mod_p = mpz_fdiv_ui(modulus_.get_mpz_t(), p);
  BigInt g;
  const BigInt bp(static_cast<unsigned long>(p));
  mpz_gcd(g.get_mpz_t(), modulus_.get_mpz_t(), bp.get_mpz_t());
  if (g != 1) {
    throw InputError("CRT moduli are not pairwise coprime (modulus " + std::to_string(p) + ")");
  }
  // x' = x + M * ((r - x) * M^{-1} mod p)
  const std::uint64_t x_mod_p = mpz_fdiv_ui(value_.get_mpz_t(), p);
  const Fp delta = (Fp(residue, p) - Fp(x_mod_p, p)) * Fp(m_mod_p, p).inverse();
  value_ += modulus_ * static_cast<unsigned long>(delta.value());
  modulus_ *= static_cast<unsigned long>(p);
}

BigInt crt_combine(const std::vector<Residue>& residues) {
  CrtAccumulator acc;
  for (const auto& r : residues) acc.add(r.value % r.modulus, r.modulus);
  return acc.value();
}

std::optional<BigRational> try_rational_reconstruct(const BigInt& x, const BigInt& m) {
  if (m <= 0 || x < 0 || x >= m) return std::nullopt;
  BigInt bound;
  {
    BigInt half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  }
  BigInt r0 = m, r1 = x, t0 = 0, t1 = 1, q, tmp;
  while (r1 > bound) {
    mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    tmp = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(tmp);
    tmp = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(tmp);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  BigInt g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), m.get_mpz_t());
  if (g != 1) return std::nullopt;
  if (t1 < 0) {
    t1 = -t1;
    r1 = -r1;
  }
  BigRational q_out(r1, t1);
  q_out.canonicalize();
  return q_out;
}

BigRational rational_reconstruct(const BigInt& x, const BigInt& m) {
  auto q = try_rational_reconstruct(x, m);
  if (!q) {
    throw ReconstructionError("rational reconstruction failed for residue " + x.get_str() +
                              " modulo " + m.get_str());
  }
  return *q;
}

}  // namespace patdist
