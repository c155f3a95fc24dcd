#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patdist {

// Ordered set of single-character letters. Letter order fixes the column order
// of transitions and the canonical state numbering of automata.
class Alphabet {
 public:
  Alphabet() { index_.fill(-1); }
  // Throws InputError on an empty or repeated letter list.
  explicit Alphabet(std::string_view letters);

  std::size_t size() const { return letters_.size(); }
  char letter(std::size_t i) const { return letters_[i]; }
  const std::string& letters() const { return letters_; }
  bool contains(char c) const { return index_[static_cast<unsigned char>(c)] >= 0; }
  // Throws InputError for letters outside the alphabet.
  std::size_t index(char c) const;

  // Letter indices for a whole string; throws on foreign letters.
  std::vector<std::size_t> encode(std::string_view text) const;

  // Power |A|^m, the number of order-m contexts; throws on overflow.
  std::size_t context_count(unsigned order) const;
  // Context index <-> word, first letter most significant.
  std::string context_word(std::size_t context, unsigned order) const;
  std::size_t context_index(std::string_view word) const;

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.letters_ == b.letters_; }

 private:
  std::string letters_;
  std::array<int, 256> index_{};
};

}  // namespace patdist
