#include "patdist/alphabet.hpp"

#include <limits>

#include "patdist/error.hpp"

namespace patdist {

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
  index_.fill(-1);
  if (letters_.empty()) throw InputError("alphabet must not be empty");
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const auto c = static_cast<unsigned char>(letters_[i]);
    if (index_[c] >= 0) {
      throw InputError(std::string("alphabet repeats letter '") + letters_[i] + "'");
    }
    index_[c] = static_cast<int>(i);
  }
}

std::size_t Alphabet::index(char c) const {
  const int i = index_[static_cast<unsigned char>(c)];
  if (i < 0) throw InputError(std::string("letter '") + c + "' is not in alphabet " + letters_);
  return static_cast<std::size_t>(i);
}

std::vector<std::size_t> Alphabet::encode(std::string_view text) const {
  std::vector<std::size_t> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(index(c));
  return out;
}

std::size_t Alphabet::context_count(unsigned order) const {
  std::size_t n = 1;
  for (unsigned i = 0; i < order; ++i) {
    if (n > std::numeric_limits<std::size_t>::max() / size()) {
      throw InputError("context space |A|^m overflows");
    }
    n *= size();
  }
  return n;
}

std::string Alphabet::context_word(std::size_t context, unsigned order) const {
  std::string w(order, '?');
  for (unsigned i = order; i-- > 0;) {
    w[i] = letters_[context % size()];
    context /= size();
  }
  return w;
}

std::size_t Alphabet::context_index(std::string_view word) const {
  std::size_t c = 0;
  for (char ch : word) c = c * size() + index(ch);
  return c;
}

}  // namespace patdist
