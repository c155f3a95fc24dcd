#include <random>
#include <set>

#include "doctest.h"
#include "patdist/automaton.hpp"
#include "patdist/error.hpp"
#include "patdist/pattern.hpp"

using namespace patdist;

namespace {

// AB A^k AA A^k AB where A^k is any word of length k.
std::string w_k(int k) {
  const std::string run = ".{" + std::to_string(k) + "}";
  return "AB" + run + "AA" + run + "AB";
}

Dfa dfa_for(const std::string& pattern, const std::string& letters, const ClassTable& classes = {}) {
  return build_min_dfa(parse_pattern(pattern, Alphabet(letters), classes));
}

// Independent matcher: set of end offsets reachable by matching `n` from
// `start` in `w` by direct recursion on the syntax tree.
std::set<std::size_t> match_ends(const PatternNode& n, const std::vector<std::size_t>& w,
                                 std::size_t start) {
  using Kind = PatternNode::Kind;
  std::set<std::size_t> out;
  switch (n.kind) {
    case Kind::kEpsilon:
      out.insert(start);
      break;
    case Kind::kLiteral:
    case Kind::kCharClass:
      if (start < w.size() &&
          std::find(n.letters.begin(), n.letters.end(), w[start]) != n.letters.end()) {
        out.insert(start + 1);
      }
      break;
    case Kind::kConcat: {
      std::set<std::size_t> cur = {start};
      for (const auto& c : n.children) {
        std::set<std::size_t> next;
        for (auto s : cur) {
          auto e = match_ends(c, w, s);
          next.insert(e.begin(), e.end());
        }
        cur = std::move(next);
      }
      out = cur;
      break;
    }
    case Kind::kAlternation:
      for (const auto& c : n.children) {
        auto e = match_ends(c, w, start);
        out.insert(e.begin(), e.end());
      }
      break;
    case Kind::kStar:
    case Kind::kRepeat: {
      const std::size_t lo = n.kind == Kind::kStar ? 0 : n.min;
      const bool unbounded = n.kind == Kind::kStar || n.unbounded;
      const std::size_t hi = unbounded ? w.size() + lo + 1 : n.max;
      std::set<std::size_t> cur = {start};
      for (std::size_t i = 0; i <= hi && !cur.empty(); ++i) {
        if (i >= lo) out.insert(cur.begin(), cur.end());
        if (i == hi) break;
        std::set<std::size_t> next;
        for (auto s : cur) {
          auto e = match_ends(n.children.front(), w, s);
          next.insert(e.begin(), e.end());
        }
        // Once past the minimum, revisiting offsets adds nothing new.
        if (i >= lo && unbounded) {
          for (auto it = next.begin(); it != next.end();) {
            it = out.count(*it) ? next.erase(it) : std::next(it);
          }
        }
        cur = std::move(next);
      }
      break;
    }
  }
  return out;
}

std::vector<std::size_t> oracle_ends(const PatternAst& ast, const std::vector<std::size_t>& w) {
  std::set<std::size_t> ends;
  for (std::size_t s = 0; s < w.size(); ++s) {
    for (auto e : match_ends(ast.root, w, s)) {
      if (e > s) ends.insert(e);
    }
  }
  return {ends.begin(), ends.end()};
}

std::vector<std::size_t> dfa_ends(const Dfa& dfa, const std::vector<std::size_t>& w) {
  std::vector<std::size_t> ends;
  std::size_t q = dfa.start;
  for (std::size_t i = 0; i < w.size(); ++i) {
    q = dfa.next(q, w[i]);
    if (dfa.is_final(q)) ends.push_back(i + 1);
  }
  return ends;
}

std::string random_pattern(std::mt19937_64& rng, int depth) {
  const int choice = static_cast<int>(rng() % (depth > 2 ? 2 : 7));
  switch (choice) {
    case 0:
      return "A";
    case 1:
      return "B";
    case 2:
      return random_pattern(rng, depth + 1) + random_pattern(rng, depth + 1);
    case 3:
      return "(" + random_pattern(rng, depth + 1) + "|" + random_pattern(rng, depth + 1) + ")";
    case 4: {
      const auto lo = rng() % 3;
      const auto hi = lo + rng() % 3;
      return "(" + random_pattern(rng, depth + 1) + "){" + std::to_string(lo) + "," +
             std::to_string(hi) + "}";
    }
    case 5:
      return "(" + random_pattern(rng, depth + 1) + ")+";
    default:
      return "N" + random_pattern(rng, depth + 1);
  }
}

// All pairs of states are distinguishable (table filling).
bool is_minimal(const Dfa& dfa) {
  const std::size_t n = dfa.size(), k = dfa.alphabet.size();
  std::vector<char> dist(n * n, 0);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) dist[p * n + q] = dfa.final[p] != dfa.final[q];
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (dist[p * n + q]) continue;
        for (std::size_t a = 0; a < k; ++a) {
          if (dist[dfa.next(p, a) * n + dfa.next(q, a)]) {
            dist[p * n + q] = dist[q * n + p] = 1;
            changed = true;
            break;
          }
        }
      }
  }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q)
      if (!dist[p * n + q]) return false;
  return true;
}

// Enumerates all words up to max_len and checks every state reached by a
// word of length >= m is labeled with that word's m-suffix, and that the
// transient marking matches reachability by length.
void check_order_m(const OrderMDfa& om, std::size_t max_len) {
  const std::size_t k = om.dfa.alphabet.size();
  const unsigned m = om.order;
  std::vector<char> long_reach(om.dfa.size(), 0);
  // Frontier of (state, word).
  std::vector<std::pair<std::size_t, std::vector<std::size_t>>> layer = {{om.dfa.start, {}}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> next;
    for (const auto& [q, w] : layer) {
      if (len >= m) {
        long_reach[q] = 1;
        REQUIRE(om.backmap[q].has_value());
        std::size_t ctx = 0;
        for (std::size_t i = len - m; i < len; ++i) ctx = ctx * k + w[i];
        CHECK(*om.backmap[q] == ctx);
      }
      if (len < max_len) {
        for (std::size_t a = 0; a < k; ++a) {
          auto w2 = w;
          w2.push_back(a);
          next.emplace_back(om.dfa.next(q, a), std::move(w2));
        }
      }
    }
    layer = std::move(next);
  }
  for (std::size_t q = 0; q < om.dfa.size(); ++q) {
    CHECK(static_cast<bool>(long_reach[q]) == !om.is_transient(q));
  }
}

}  // namespace

TEST_CASE("pattern parsing") {
  const Alphabet abcd("ABCD");
  CHECK(to_string(parse_pattern("ADAD", abcd).root, abcd) == "Concat[A,D,A,D]");
  CHECK(to_string(parse_pattern("AD(A|D){2}AD", abcd).root, abcd) ==
        "Concat[A,D,Repeat(Alt[A,D],2,2),A,D]");
  const Alphabet dna("ACGT");
  const auto classes = parse_class_table("N=(A|C|G|T)");
  CHECK(to_string(parse_pattern("TTGACAN{16,18}ATATAAT", dna, classes).root, dna) ==
        "Concat[T,T,G,A,C,A,Repeat(N,16,18),A,T,A,T,A,A,T]");
  CHECK(to_string(parse_pattern("A*B+C?", abcd).root, abcd) ==
        "Concat[Star(A),Repeat(B,1,inf),Repeat(C,0,1)]");
  CHECK(to_string(parse_pattern("[AC].{2,}", abcd).root, abcd) ==
        "Concat[[AC],Repeat(.,2,inf)]");
  CHECK(parse_class_table("N=ACGT, R=[AG]").at('R') == "AG");
}

TEST_CASE("pattern syntax errors carry positions") {
  const Alphabet ab("AB");
  auto position_of = [&](const char* text) -> long {
    try {
      parse_pattern(text, ab);
    } catch (const SyntaxError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position_of("A(B") == 1);
  CHECK(position_of("AB)") == 2);
  CHECK(position_of("A{3,1}") == 1);
  CHECK(position_of("AC") == 1);
  CHECK(position_of("*A") == 0);
  CHECK(position_of("A{") == 2);
  CHECK_THROWS_AS(parse_pattern("", ab), InputError);
  CHECK_THROWS_AS(parse_pattern("A", ab, parse_class_table("A=AB")), InputError);
  CHECK_THROWS_AS(build_min_dfa(parse_pattern("A*", ab)), InputError);
}

TEST_CASE("minimal DFA sizes for the W_k family") {
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {
      {12, 1}, {27, 3}, {57, 6}, {122, 13}, {262, 28}};
  for (int k = 1; k <= 5; ++k) {
    CAPTURE(k);
    Dfa dfa = dfa_for(w_k(k), "AB");
    CHECK(dfa.size() == expected[k - 1].first);
    CHECK(dfa.final_count() == expected[k - 1].second);
    // Named-class spelling gives the same automaton.
    const std::string n = "N{" + std::to_string(k) + "}";
    Dfa via_class = dfa_for("AB" + n + "AA" + n + "AB", "AB", parse_class_table("N=AB"));
    CHECK(via_class.delta == dfa.delta);
    CHECK(via_class.final == dfa.final);
  }
  CHECK(is_minimal(dfa_for(w_k(2), "AB")));
}

TEST_CASE("small automata") {
  Dfa a = dfa_for("A", "AB");
  CHECK(a.size() == 2);
  CHECK(a.final_count() == 1);
  Dfa adad = dfa_for("ADAD", "ABCD");
  CHECK(adad.size() == 5);
  CHECK(adad.final_count() == 1);
  Dfa t2a = dfa_for("AD(A|D){2}AD", "ABCD");
  CHECK(t2a.size() == 12);
  CHECK(t2a.final_count() == 2);
  Dfa t2b = dfa_for("AD(A|D){5}AD", "ABCD");
  CHECK(t2b.size() == 50);
  CHECK(t2b.final_count() == 8);
}

TEST_CASE("scan") {
  Dfa w1 = dfa_for(w_k(1), "AB");
  CHECK(scan(w1, "ABAAABBAAAABBAABABAB") == std::vector<std::size_t>{12, 18});
  CHECK(scan(w1, "").empty());
  CHECK(scan(dfa_for("AB", "AB"), "ABAB") == std::vector<std::size_t>{2, 4});
  CHECK(scan(dfa_for("AA", "AB"), "AAAA") == std::vector<std::size_t>{2, 3, 4});
  CHECK_THROWS_AS(scan(w1, "ABC"), InputError);
}

TEST_CASE("determinization agrees with a direct matcher") {
  std::mt19937_64 rng(2024);
  const Alphabet ab("AB");
  const auto classes = parse_class_table("N=AB");
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const std::string text = random_pattern(rng, 0);
    CAPTURE(text);
    PatternAst ast = parse_pattern(text, ab, classes);
    Dfa dfa;
    try {
      dfa = build_min_dfa(ast);
    } catch (const InputError&) {
      continue;  // nullable pattern
    }
    CHECK(is_minimal(dfa));
    for (int w = 0; w < 30; ++w) {
      std::vector<std::size_t> word(rng() % 13);
      for (auto& c : word) c = rng() % 2;
      CHECK(dfa_ends(dfa, word) == oracle_ends(ast, word));
    }
    ++checked;
  }
  CHECK(checked > 80);
}

TEST_CASE("order-m automata") {
  Dfa w1 = dfa_for(w_k(1), "AB");
  OrderMDfa m0 = make_order_m(w1, 0);
  CHECK(m0.dfa.delta == w1.delta);
  CHECK(m0.backmap.empty());
  CHECK(m0.chain_size() == 12);

  OrderMDfa m1 = make_order_m(w1, 1);
  CHECK(m1.chain_size() == 12);
  check_order_m(m1, 14);

  const Dfa cg = dfa_for("CGCACCC", "ACGT");
  OrderMDfa m2 = make_order_m(cg, 2);
  CHECK(m2.chain_size() == 21);
  CHECK(m2.dfa.final_count() == 1);
  check_order_m(m2, 9);

  OrderMDfa adad3 = make_order_m(dfa_for("ADAD", "ABCD"), 3);
  check_order_m(adad3, 7);
  // Scanning is unchanged by the augmentation.
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    std::string s;
    for (int j = 0; j < 40; ++j) s += "ACGT"[rng() % 4];
    CHECK(scan(m2.dfa, s) == scan(cg, s));
  }
}

TEST_CASE("dot export") {
  const std::string dot = to_dot(dfa_for("AB", "AB"));
  CHECK(dot.find("digraph") == 0);
  CHECK(dot.find("2 [shape=doublecircle]") != std::string::npos);
  CHECK(dot.find("0 -> 1 [label=\"A\"]") != std::string::npos);
}
