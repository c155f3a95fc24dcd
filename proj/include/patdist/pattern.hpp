#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "patdist/alphabet.hpp"

namespace patdist {

// Named letter classes usable inside patterns, e.g. N -> "ACGT".
using ClassTable = std::map<char, std::string>;

// Parses "N=ACGT,R=AG" (also "N=(A|C|G|T)" or "N=[ACGT]") into a table.
// Throws InputError on malformed entries.
ClassTable parse_class_table(std::string_view text);

struct PatternNode {
  enum class Kind { kEpsilon, kLiteral, kCharClass, kConcat, kAlternation, kRepeat, kStar };

  Kind kind = Kind::kEpsilon;
  // Letter indices: one for a literal, a sorted set for a class.
  std::vector<std::size_t> letters;
  // Class name for printing; '.' for the any-letter class, 0 for brackets.
  char class_name = 0;
  std::vector<PatternNode> children;
  // Repeat bounds; max is ignored when unbounded.
  std::size_t min = 0;
  std::size_t max = 0;
  bool unbounded = false;
};

struct PatternAst {
  Alphabet alphabet;
  PatternNode root;
};

// Grammar:
//   alt    := concat ('|' concat)*
//   concat := postfix*
//   postfix:= atom ('*' | '+' | '?' | '{k}' | '{k,}' | '{k,l}')*
//   atom   := letter | class-name | '.' | '[' letters ']' | '(' alt ')'
// Class names must not collide with alphabet letters. Throws SyntaxError
// (with the offending offset) or InputError.
PatternAst parse_pattern(std::string_view text, const Alphabet& alphabet,
                         const ClassTable& classes = {});

// Compact structural rendering, e.g. Concat[A,D,Repeat(Alt[A,D],2,2),A,D].
std::string to_string(const PatternNode& node, const Alphabet& alphabet);

}  // namespace patdist
