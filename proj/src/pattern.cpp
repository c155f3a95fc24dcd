#include "patdist/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "patdist/error.hpp"

namespace patdist {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

class Parser {
 public:
  Parser(std::string_view text, const Alphabet& alphabet, const ClassTable& classes)
      : text_(text), alphabet_(alphabet), classes_(classes) {}

  PatternNode parse() {
    PatternNode root = parse_alt();
    if (pos_ != text_.size()) {
      throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return root;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  PatternNode parse_alt() {
    std::vector<PatternNode> branches;
    branches.push_back(parse_concat());
    while (!at_end() && peek() == '|') {
      ++pos_;
      branches.push_back(parse_concat());
    }
    if (branches.size() == 1) return std::move(branches.front());
    PatternNode n;
    n.kind = PatternNode::Kind::kAlternation;
    n.children = std::move(branches);
    return n;
  }

  PatternNode parse_concat() {
    std::vector<PatternNode> items;
    while (!at_end() && peek() != '|' && peek() != ')') items.push_back(parse_postfix());
    if (items.empty()) return PatternNode{};
    if (items.size() == 1) return std::move(items.front());
    PatternNode n;
    n.kind = PatternNode::Kind::kConcat;
    n.children = std::move(items);
    return n;
  }

  PatternNode parse_postfix() {
    PatternNode node = parse_atom();
    while (!at_end()) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        PatternNode s;
        s.kind = PatternNode::Kind::kStar;
        s.children.push_back(std::move(node));
        node = std::move(s);
      } else if (c == '+' || c == '?') {
        ++pos_;
        node = repeat(std::move(node), c == '+' ? 1 : 0, 1, c == '+');
      } else if (c == '{') {
        node = parse_braces(std::move(node));
      } else {
        break;
      }
    }
    return node;
  }

  static PatternNode repeat(PatternNode child, std::size_t lo, std::size_t hi, bool unbounded) {
    PatternNode r;
    r.kind = PatternNode::Kind::kRepeat;
    r.min = lo;
    r.max = unbounded ? lo : hi;
    r.unbounded = unbounded;
    r.children.push_back(std::move(child));
    return r;
  }

  std::size_t parse_number() {
    const std::size_t start = pos_;
    std::size_t v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      const std::size_t digit = static_cast<std::size_t>(peek() - '0');
      if (v > (std::numeric_limits<std::size_t>::max() - digit) / 10) {
        throw SyntaxError("repeat count too large", start);
      }
      v = v * 10 + digit;
      ++pos_;
    }
    if (pos_ == start) throw SyntaxError("expected a repeat count", start);
    return v;
  }

  PatternNode parse_braces(PatternNode child) {
    const std::size_t open = pos_++;
    const std::size_t lo = parse_number();
    std::size_t hi = lo;
    bool unbounded = false;
    if (!at_end() && peek() == ',') {
      ++pos_;
      if (!at_end() && peek() == '}') {
        unbounded = true;
      } else {
        hi = parse_number();
      }
    }
    if (at_end() || peek() != '}') throw SyntaxError("unterminated repeat", open);
    ++pos_;
    if (!unbounded && hi < lo) throw SyntaxError("repeat upper bound below lower bound", open);
    return repeat(std::move(child), lo, hi, unbounded);
  }

  PatternNode parse_atom() {
    if (at_end()) throw SyntaxError("unexpected end of pattern", pos_);
    const std::size_t here = pos_;
    const char c = peek();
    if (c == '(') {
      ++pos_;
      PatternNode inner = parse_alt();
      if (at_end() || peek() != ')') throw SyntaxError("unbalanced '('", here);
      ++pos_;
      return inner;
    }
    if (c == '[') {
      ++pos_;
      std::vector<std::size_t> set;
      while (!at_end() && peek() != ']') {
        if (!alphabet_.contains(peek())) {
          throw SyntaxError(std::string("letter '") + peek() + "' is not in the alphabet", pos_);
        }
        set.push_back(alphabet_.index(peek()));
        ++pos_;
      }
      if (at_end()) throw SyntaxError("unbalanced '['", here);
      ++pos_;
      if (set.empty()) throw SyntaxError("empty letter class", here);
      return char_class(std::move(set), 0);
    }
    if (c == '.') {
      ++pos_;
      std::vector<std::size_t> all(alphabet_.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      return char_class(std::move(all), '.');
    }
    if (c == ')' || c == '*' || c == '+' || c == '?' || c == '{' || c == '}' || c == ']' ||
        c == '|') {
      throw SyntaxError(std::string("unexpected '") + c + "'", here);
    }
    ++pos_;
    if (alphabet_.contains(c)) {
      PatternNode n;
      n.kind = PatternNode::Kind::kLiteral;
      n.letters = {alphabet_.index(c)};
      return n;
    }
    auto it = classes_.find(c);
    if (it != classes_.end()) {
      std::vector<std::size_t> set;
      for (char l : it->second) set.push_back(alphabet_.index(l));
      return char_class(std::move(set), c);
    }
    throw SyntaxError(std::string("letter '") + c + "' is not in the alphabet", here);
  }

  static PatternNode char_class(std::vector<std::size_t> set, char name) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    PatternNode n;
    n.kind = PatternNode::Kind::kCharClass;
    n.letters = std::move(set);
    n.class_name = name;
    return n;
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  const ClassTable& classes_;
  std::size_t pos_ = 0;
};

}  // namespace

ClassTable parse_class_table(std::string_view text) {
  ClassTable table;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find_first_of(",;", start);
    if (end == std::string_view::npos) end = text.size();
    const std::string entry = trim(text.substr(start, end - start));
    start = end + 1;
    if (entry.empty()) continue;
    const auto eq = entry.find('=');
    const std::string name = eq == std::string::npos ? "" : trim(entry.substr(0, eq));
    if (name.size() != 1) throw InputError("malformed class entry '" + entry + "'");
    std::string letters;
    for (char c : entry.substr(eq + 1)) {
      if (c == '(' || c == ')' || c == '[' || c == ']' || c == '|' ||
          std::isspace(static_cast<unsigned char>(c))) {
        continue;
      }
      letters.push_back(c);
    }
    if (letters.empty()) throw InputError("class '" + name + "' has no letters");
    table[name[0]] = letters;
  }
  return table;
}

PatternAst parse_pattern(std::string_view text, const Alphabet& alphabet,
                         const ClassTable& classes) {
  if (text.empty()) throw InputError("pattern must not be empty");
  for (const auto& [name, letters] : classes) {
    if (alphabet.contains(name)) {
      throw InputError(std::string("class name '") + name + "' collides with an alphabet letter");
    }
    for (char l : letters) {
      if (!alphabet.contains(l)) {
        throw InputError(std::string("class '") + name + "' uses letter '" + l +
                         "' outside the alphabet");
      }
    }
  }
  return PatternAst{alphabet, Parser(text, alphabet, classes).parse()};
}

std::string to_string(const PatternNode& node, const Alphabet& alphabet) {
  using Kind = PatternNode::Kind;
  auto list = [&](const char* head) {
    std::string s = std::string(head) + "[";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) s += ",";
      s += to_string(node.children[i], alphabet);
    }
    return s + "]";
  };
  switch (node.kind) {
    case Kind::kEpsilon:
      return "Eps";
    case Kind::kLiteral:
      return std::string(1, alphabet.letter(node.letters.front()));
    case Kind::kCharClass: {
      if (node.class_name != 0) return std::string(1, node.class_name);
      std::string s = "[";
      for (auto l : node.letters) s += alphabet.letter(l);
      return s + "]";
    }
    case Kind::kConcat:
      return list("Concat");
    case Kind::kAlternation:
      return list("Alt");
    case Kind::kRepeat:
      return "Repeat(" + to_string(node.children.front(), alphabet) + "," +
             std::to_string(node.min) + "," + (node.unbounded ? "inf" : std::to_string(node.max)) +
             ")";
    case Kind::kStar:
      return "Star(" + to_string(node.children.front(), alphabet) + ")";
  }
  return "?";
}

}  // namespace patdist
