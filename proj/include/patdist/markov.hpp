#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "patdist/alphabet.hpp"
#include "patdist/rational.hpp"

namespace patdist {

// Homogeneous order-m Markov model with exact rational parameters. Contexts
// are words of length m indexed by Alphabet::context_index.
struct MarkovModel {
  Alphabet alphabet;
  unsigned order = 0;
  // Distribution of the first m letters, indexed by context; empty for m = 0.
  std::vector<BigRational> initial;
  // transition[c * |A| + b] = P(next letter b | context c); rows of undefined
  // contexts are all zero.
  std::vector<BigRational> transition;
  std::vector<char> defined;
  // Set when `initial` was derived from a floating-point computation.
  bool initial_approximate = false;

  std::size_t context_count() const { return defined.size(); }
  const BigRational& prob(std::size_t context, std::size_t letter) const {
    return transition[context * alphabet.size() + letter];
  }
};

// Throws InputError unless every defined row sums to exactly 1, all entries
// lie in [0, 1] and (for m >= 1) the initial distribution sums to 1.
void validate(const MarkovModel& model);

// Every letter equally likely, order 0.
MarkovModel uniform_iid(const Alphabet& alphabet);

// Maximum-likelihood fit from per-(context, letter) counts. The initial
// distribution is left empty for the caller to fill.
MarkovModel fit_from_counts(const Alphabet& alphabet, unsigned order,
                            const std::vector<std::uint64_t>& counts);

// Counts of every (context, letter) pair; transitions never cross sequence
// boundaries.
std::vector<std::uint64_t> transition_counts(const Alphabet& alphabet, unsigned order,
                                             const std::vector<std::string>& sequences);

// MLE fit; the initial distribution is a point mass on the first m letters of
// the first sequence long enough to provide them.
MarkovModel fit_mle(const std::vector<std::string>& sequences, const Alphabet& alphabet,
                    unsigned order);
MarkovModel fit_mle(std::string_view sequence, const Alphabet& alphabet, unsigned order);

// Initial distribution helpers.
void set_initial_point_mass(MarkovModel& model, std::string_view context);
// Stationary distribution of the context chain, computed in extended
// precision and stored as the nearest rationals (flagged approximate).
void set_initial_stationary(MarkovModel& model, long precision_bits = 1024);

// Text format:
//   patdist-model 1
//   alphabet ACGT
//   order 2
//   init GA 1
//   trans TA C 1451956/8306051
// Order 0 writes "-" for the empty context. Loading validates.
void save_model(const MarkovModel& model, std::ostream& out);
MarkovModel load_model(std::istream& in);
void save_model_file(const MarkovModel& model, const std::string& path);
MarkovModel load_model_file(const std::string& path);

// FNV-1a hash of the canonical text form.
std::uint64_t model_hash(const MarkovModel& model);

// FASTA-style reader: '>' lines start a new record, letters are uppercased,
// whitespace ignored. Foreign characters throw InputError unless
// skip_foreign is set, in which case they are dropped.
std::vector<std::string> read_fasta(std::istream& in, const Alphabet& alphabet,
                                    bool skip_foreign = false);
std::vector<std::string> read_fasta_file(const std::string& path, const Alphabet& alphabet,
                                         bool skip_foreign = false);

}  // namespace patdist
