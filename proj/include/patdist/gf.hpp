#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "patdist/embedding.hpp"
#include "patdist/rational.hpp"

namespace patdist {

// Bivariate generating function sum_l sum_k P(N_l = k) y^k z^l written as
// z^m B(y,z) / A(y,z). numerator[i][k] is the coefficient of y^k z^i in B,
// likewise for the denominator; denominator[0] is the constant 1.
struct BivariateFraction {
  unsigned order = 0;
  std::vector<std::vector<BigRational>> numerator;
  std::vector<std::vector<BigRational>> denominator;

  long numerator_degree() const { return static_cast<long>(numerator.size()) - 1; }
  long denominator_degree() const { return static_cast<long>(denominator.size()) - 1; }
  std::size_t degree() const;  // max of the two z-degrees
  std::size_t y_degree() const;
};

struct ProbeResult {
  std::size_t degree = 0;  // max(deg B, deg A) at the probe point
  long numerator_degree = 0;
  long denominator_degree = 0;
  std::size_t terms_used = 0;
  std::uint64_t prime = 0;
};

// Las Vegas degree search: fraction reconstruction of the scalar series at
// one random point modulo one random prime, with the number of terms
// doubled until the approximants for d0 and d0 + 1 agree and a residual
// check on further terms passes. Throws ReconstructionError when the
// degree would exceed the chain size.
ProbeResult probe_degree(const EmbeddedChain& chain, std::uint64_t seed = 1);

struct ReconstructOptions {
  unsigned prime_bits = 31;
  std::uint64_t seed = 1;
  // Series terms beyond 2d + 1 used to verify the result exactly.
  std::size_t extra_terms = 10;
  // Upper bound on the estimated size of the exact series prefix.
  double memory_budget_bytes = 8.0e9;
  // Rounds of adding primes or raising d before giving up.
  int max_rounds = 12;
};

struct ReconstructStats {
  std::size_t primes_used = 0;
  std::size_t points_discarded = 0;
  std::size_t series_terms = 0;
  std::size_t degree_bound = 0;
};

// Exact B/A with z-degrees <= d, built from images modulo word-size primes
// at evaluation points y = 0, 1, 2, ...; verified against the exact series
// before returning. When the result fails verification the routine adds
// primes, then raises d, within max_rounds.
BivariateFraction reconstruct_gf(const EmbeddedChain& chain, std::size_t d,
                                 const ReconstructOptions& options = {},
                                 ReconstructStats* stats = nullptr);

// Probe plus reconstruction.
BivariateFraction find_gf(const EmbeddedChain& chain, const ReconstructOptions& options = {},
                          ReconstructStats* stats = nullptr);

// Estimated bytes for the exact series prefix of `terms` terms. Throws
// MemoryBudgetError above the budget.
double series_memory_estimate(const EmbeddedChain& chain, std::size_t terms);

// A * (sum g_i z^i) == B modulo z^(2d + 1 + extra), in exact arithmetic.
bool verify(const BivariateFraction& f, const EmbeddedChain& chain, std::size_t extra);
bool verify_series(const BivariateFraction& f, const std::vector<std::vector<BigRational>>& series);

// Text persistence:
//   patdist-fraction 1
//   alphabet ABCD
//   pattern ADAD
//   model-hash 0123456789abcdef
//   order 0
//   degrees 2 4
//   B <z-index> <y-index> <rational>
//   A <z-index> <y-index> <rational>
struct FractionKey {
  std::string alphabet;
  std::string pattern;
  std::uint64_t model_hash = 0;
};
void save_fraction(const BivariateFraction& f, const FractionKey& key, std::ostream& out);
BivariateFraction load_fraction(std::istream& in, FractionKey* key = nullptr);

}  // namespace patdist
