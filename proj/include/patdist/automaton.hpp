#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patdist/alphabet.hpp"
#include "patdist/pattern.hpp"

namespace patdist {

// Complete DFA over an ordered alphabet. Transitions are stored row-major:
// delta[q * |A| + a].
struct Dfa {
  Alphabet alphabet;
  std::size_t start = 0;
  std::vector<std::uint32_t> delta;
  std::vector<char> final;

  std::size_t size() const { return final.size(); }
  std::size_t next(std::size_t q, std::size_t a) const { return delta[q * alphabet.size() + a]; }
  bool is_final(std::size_t q) const { return final[q] != 0; }
  std::size_t final_count() const;
};

// Minimal DFA for A*L(pattern): Glushkov automaton with a looping start,
// subset construction, Hopcroft minimization, BFS numbering from the start
// state with letters taken in alphabet order. Throws InputError when the
// language is empty or contains the empty word.
Dfa build_min_dfa(const PatternAst& ast);

// Coarsest partition refining `labels` that is compatible with delta; the
// result maps each state to its class. Hopcroft's algorithm.
std::vector<std::uint32_t> hopcroft_classes(const Dfa& dfa, const std::vector<std::uint64_t>& labels);

// Quotient by a compatible partition, renumbered in BFS order from the start
// state; unreachable states are dropped. Optionally returns, per new state,
// one original representative.
Dfa quotient(const Dfa& dfa, const std::vector<std::uint32_t>& classes,
             std::vector<std::size_t>* representative = nullptr);

// Minimal DFA equivalent to `dfa`.
Dfa minimize(const Dfa& dfa);

// DFA in which every state reached by a word of length >= m knows the last m
// letters of that word.
struct OrderMDfa {
  Dfa dfa;
  unsigned order = 0;
  // Context index (see Alphabet::context_index) of the last m letters, or
  // nullopt for transient states reachable only by words shorter than m.
  // Empty when order is 0.
  std::vector<std::optional<std::size_t>> backmap;

  bool is_transient(std::size_t q) const { return order > 0 && !backmap[q].has_value(); }
  std::size_t context(std::size_t q) const { return order == 0 ? 0 : *backmap[q]; }
  // Number of non-transient states (the Markov chain state space).
  std::size_t chain_size() const;
};

// Product with the de Bruijn automaton of the last m letters, minimized
// without merging states that carry different contexts.
OrderMDfa make_order_m(const Dfa& dfa, unsigned order);

// 1-based end positions i with delta(start, x_1..x_i) final.
std::vector<std::size_t> scan(const Dfa& dfa, std::string_view sequence);
std::size_t count_occurrences(const Dfa& dfa, const std::vector<std::size_t>& letters);

// Graphviz text; final states are drawn as double circles.
std::string to_dot(const Dfa& dfa, const std::string& name = "dfa");

}  // namespace patdist
