#pragma once

#include <cstdint>
#include <vector>

#include "patdist/automaton.hpp"
#include "patdist/markov.hpp"
#include "patdist/rational.hpp"

namespace patdist {

struct OracleResult {
  // Exhaustive mode: exact P(N = k), k = 0..length-m.
  std::vector<BigRational> exact;
  // Monte Carlo mode: empirical frequencies and binomial standard errors.
  std::vector<double> estimate;
  std::vector<double> standard_error;
  std::vector<std::uint64_t> counts;
  std::uint64_t samples = 0;
};

// Sums the model probability of every sequence of the given length, grouped
// by occurrence count (occurrences ending inside the first m letters are not
// counted). Throws InputError when |A|^length exceeds the budget.
OracleResult exhaustive(const OrderMDfa& automaton, const MarkovModel& model, std::size_t length,
                        std::uint64_t budget = 10000000);

// Seeded simulation with a 64-bit Mersenne Twister; letters are drawn by
// inverse CDF against 64-bit thresholds ceil(F(b) * 2^64). The sample budget
// is split into a fixed number of shards with derived seeds, so the output
// does not depend on the worker count.
OracleResult monte_carlo(const OrderMDfa& automaton, const MarkovModel& model, std::size_t length,
                         std::uint64_t samples, std::uint64_t seed, unsigned jobs = 1);

}  // namespace patdist
