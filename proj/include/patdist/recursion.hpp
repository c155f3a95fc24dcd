#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "patdist/embedding.hpp"
#include "patdist/ext_float.hpp"
#include "patdist/rational.hpp"

namespace patdist {

// P(N_length = k) for k = 0..values.size()-1.
struct CountDistribution {
  std::size_t length = 0;
  std::string method;
  std::vector<ExtFloat> values;
  std::optional<std::vector<BigRational>> exact;
  // Method-specific details (alpha, lambda, degrees, ...), printed verbatim.
  std::map<std::string, std::string> metadata;
};

// Exact or float distribution by iterating (P + yQ) on the summing vector
// modulo y^(nmax+1). Throws InputError when length < order.
CountDistribution full_distribution(const EmbeddedChain& chain, std::size_t length,
                                    std::size_t nmax, bool exact,
                                    mpfr_prec_t precision = ExtFloat::kDefaultPrecision);

struct SpectralData {
  ExtFloat lambda;
  std::size_t iterations = 0;
  // Final gap between the largest and smallest component ratio.
  ExtFloat spread;
  std::vector<ExtFloat> vector;
};

// Power method on the non-negative matrix P with Collatz-Wielandt bounds:
// stops when (max ratio - min ratio) <= eps * max ratio. Throws
// SpectralError when P annihilates the iterate or the cap is reached.
SpectralData dominant_eigenvalue(const SparseMatrix<ExtFloat>& P, const ExtFloat& eps,
                                 std::size_t max_iterations = 1000000);

struct PartialOptions {
  mpfr_prec_t precision = ExtFloat::kDefaultPrecision;
  double eta = 1e-15;
  // Relative accuracy of the dominant eigenvalue, as a power of two.
  long eps_log2 = -200;
  // Reuse a previously computed eigenvalue.
  std::optional<SpectralData> spectral;
};

// Partial recursion: run the normalized difference recursion until the
// n-th order difference settles (rank alpha), then extrapolate every
// P(N = k), k <= n, to the requested length in closed form. Falls back to
// full recursion (metadata "fallback") when alpha exceeds the length.
CountDistribution partial_distribution(const EmbeddedChain& chain, std::size_t length,
                                       std::size_t n, const PartialOptions& options = {});

}  // namespace patdist
