#include "patdist/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "patdist/error.hpp"

namespace patdist {

namespace {

constexpr std::size_t kMaxPositions = 1u << 20;

// Glushkov construction: every letter occurrence of the (repeat-expanded)
// pattern is a position; position 0 is the looping start.
class Glushkov {
 public:
  struct Fragment {
    bool nullable = true;
    std::vector<std::uint32_t> first;
    std::vector<std::uint32_t> last;
  };

  explicit Glushkov(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {
    letters_.emplace_back(alphabet_size, 1);
    follow_.emplace_back();
  }

  Fragment build(const PatternNode& n) {
    using Kind = PatternNode::Kind;
    switch (n.kind) {
      case Kind::kEpsilon:
        return {};
      case Kind::kLiteral:
      case Kind::kCharClass: {
        if (letters_.size() >= kMaxPositions) {
          throw InputError("pattern expands to more than " + std::to_string(kMaxPositions) +
                           " letter positions");
        }
        const auto p = static_cast<std::uint32_t>(letters_.size());
        std::vector<char> set(alphabet_size_, 0);
        for (auto l : n.letters) set[l] = 1;
        letters_.push_back(std::move(set));
        follow_.emplace_back();
        return {false, {p}, {p}};
      }
      case Kind::kConcat: {
        Fragment f;
        for (const auto& c : n.children) f = concat(std::move(f), build(c));
        return f;
      }
      case Kind::kAlternation: {
        Fragment f;
        f.nullable = false;
        for (const auto& c : n.children) {
          Fragment g = build(c);
          f.nullable = f.nullable || g.nullable;
          f.first.insert(f.first.end(), g.first.begin(), g.first.end());
          f.last.insert(f.last.end(), g.last.begin(), g.last.end());
        }
        return f;
      }
      case Kind::kStar:
        return star(build(n.children.front()));
      case Kind::kRepeat: {
        Fragment f;
        for (std::size_t i = 0; i < n.min; ++i) f = concat(std::move(f), build(n.children.front()));
        if (n.unbounded) return concat(std::move(f), star(build(n.children.front())));
        for (std::size_t i = n.min; i < n.max; ++i) {
          Fragment g = build(n.children.front());
          g.nullable = true;
          f = concat(std::move(f), std::move(g));
        }
        return f;
      }
    }
    throw InternalError("unknown pattern node");
  }

  void set_first(const std::vector<std::uint32_t>& first) { follow_[0] = first; }

  void finish() {
    for (auto& f : follow_) {
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
    }
  }

  std::size_t positions() const { return letters_.size(); }
  bool accepts(std::uint32_t p, std::size_t a) const { return letters_[p][a] != 0; }
  const std::vector<std::uint32_t>& follow(std::uint32_t p) const { return follow_[p]; }

 private:
  Fragment concat(Fragment a, Fragment b) {
    for (auto l : a.last) follow_[l].insert(follow_[l].end(), b.first.begin(), b.first.end());
    Fragment f;
    f.nullable = a.nullable && b.nullable;
    f.first = a.first;
    if (a.nullable) f.first.insert(f.first.end(), b.first.begin(), b.first.end());
    f.last = b.last;
    if (b.nullable) f.last.insert(f.last.end(), a.last.begin(), a.last.end());
    return f;
  }

  Fragment star(Fragment f) {
    for (auto l : f.last) follow_[l].insert(follow_[l].end(), f.first.begin(), f.first.end());
    f.nullable = true;
    return f;
  }

  std::size_t alphabet_size_;
  std::vector<std::vector<char>> letters_;
  std::vector<std::vector<std::uint32_t>> follow_;
};

Dfa determinize(const PatternAst& ast) {
  const std::size_t k = ast.alphabet.size();
  Glushkov g(k);
  Glushkov::Fragment root = g.build(ast.root);
  if (root.nullable) throw InputError("pattern matches the empty word");
  if (root.last.empty()) throw InputError("pattern language is empty");
  g.set_first(root.first);
  g.finish();
  std::vector<char> is_last(g.positions(), 0);
  for (auto p : root.last) is_last[p] = 1;

  Dfa dfa;
  dfa.alphabet = ast.alphabet;
  std::map<std::vector<std::uint32_t>, std::uint32_t> index;
  std::vector<std::vector<std::uint32_t>> sets;
  auto intern = [&](std::vector<std::uint32_t> s) {
    auto [it, fresh] = index.emplace(s, static_cast<std::uint32_t>(sets.size()));
    if (fresh) {
      const bool fin = std::any_of(s.begin(), s.end(), [&](auto p) { return is_last[p] != 0; });
      dfa.final.push_back(fin ? 1 : 0);
      sets.push_back(std::move(s));
    }
    return it->second;
  };
  intern({0});
  std::vector<char> seen(g.positions(), 0);
  for (std::size_t s = 0; s < sets.size(); ++s) {
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<std::uint32_t> next = {0};
      for (auto p : sets[s]) {
        for (auto q : g.follow(p)) {
          if (!seen[q] && g.accepts(q, a)) {
            seen[q] = 1;
            next.push_back(q);
          }
        }
      }
      for (auto q : next) seen[q] = 0;
      std::sort(next.begin(), next.end());
      const auto target = intern(std::move(next));
      dfa.delta.push_back(target);
    }
  }
  dfa.start = 0;
  return dfa;
}

}  // namespace

std::size_t Dfa::final_count() const {
  return static_cast<std::size_t>(std::count(final.begin(), final.end(), 1));
}

std::vector<std::uint32_t> hopcroft_classes(const Dfa& dfa,
                                            const std::vector<std::uint64_t>& labels) {
  const std::size_t n = dfa.size();
  const std::size_t k = dfa.alphabet.size();
  if (labels.size() != n) throw InternalError("label count differs from state count");

  // Predecessor lists per letter in compressed form.
  std::vector<std::vector<std::uint32_t>> pred_start(k, std::vector<std::uint32_t>(n + 1, 0));
  std::vector<std::vector<std::uint32_t>> pred(k, std::vector<std::uint32_t>(n));
  for (std::size_t a = 0; a < k; ++a) {
    auto& st = pred_start[a];
    for (std::size_t q = 0; q < n; ++q) ++st[dfa.next(q, a) + 1];
    std::partial_sum(st.begin(), st.end(), st.begin());
    std::vector<std::uint32_t> fill(st.begin(), st.end() - 1);
    for (std::size_t q = 0; q < n; ++q) pred[a][fill[dfa.next(q, a)]++] = static_cast<std::uint32_t>(q);
  }

  // Partition as contiguous ranges of `elems`.
  std::vector<std::uint32_t> elems(n);
  std::iota(elems.begin(), elems.end(), 0);
  std::stable_sort(elems.begin(), elems.end(),
                   [&](std::uint32_t x, std::uint32_t y) { return labels[x] < labels[y]; });
  std::vector<std::uint32_t> where(n), block(n);
  std::vector<std::size_t> bstart, bend, marked;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || labels[elems[i]] != labels[elems[i - 1]]) {
      bstart.push_back(i);
      if (i) bend.push_back(i);
    }
    block[elems[i]] = static_cast<std::uint32_t>(bstart.size() - 1);
    where[elems[i]] = static_cast<std::uint32_t>(i);
  }
  if (n) bend.push_back(n);
  marked.assign(bstart.size(), 0);

  std::vector<std::uint32_t> work;
  std::vector<char> in_work(bstart.size(), 1);
  for (std::size_t b = 0; b < bstart.size(); ++b) work.push_back(static_cast<std::uint32_t>(b));

  std::vector<std::uint32_t> splitter, touched;
  while (!work.empty()) {
    const std::uint32_t b = work.back();
    work.pop_back();
    in_work[b] = 0;
    splitter.assign(elems.begin() + static_cast<long>(bstart[b]),
                    elems.begin() + static_cast<long>(bend[b]));
    for (std::size_t a = 0; a < k; ++a) {
      touched.clear();
      for (auto q : splitter) {
        for (auto i = pred_start[a][q]; i < pred_start[a][q + 1]; ++i) {
          const std::uint32_t p = pred[a][i];
          const std::uint32_t c = block[p];
          if (marked[c] == 0) touched.push_back(c);
          // Swap p into the marked prefix of its block.
          const std::size_t slot = bstart[c] + marked[c];
          const std::uint32_t other = elems[slot];
          std::swap(elems[slot], elems[where[p]]);
          where[other] = where[p];
          where[p] = static_cast<std::uint32_t>(slot);
          ++marked[c];
        }
      }
      for (auto c : touched) {
        const std::size_t size = bend[c] - bstart[c];
        if (marked[c] == size) {
          marked[c] = 0;
          continue;
        }
        const auto nb = static_cast<std::uint32_t>(bstart.size());
        bstart.push_back(bstart[c]);
        bend.push_back(bstart[c] + marked[c]);
        marked.push_back(0);
        in_work.push_back(0);
        bstart[c] += marked[c];
        marked[c] = 0;
        for (std::size_t i = bstart[nb]; i < bend[nb]; ++i) block[elems[i]] = nb;
        if (in_work[c]) {
          work.push_back(nb);
          in_work[nb] = 1;
        } else {
          const std::uint32_t smaller =
              bend[nb] - bstart[nb] <= bend[c] - bstart[c] ? nb : c;
          work.push_back(smaller);
          in_work[smaller] = 1;
        }
      }
    }
  }
  return block;
}

Dfa quotient(const Dfa& dfa, const std::vector<std::uint32_t>& classes,
             std::vector<std::size_t>* representative) {
  const std::size_t k = dfa.alphabet.size();
  const std::size_t nclasses =
      classes.empty() ? 0 : *std::max_element(classes.begin(), classes.end()) + 1;
  std::vector<std::size_t> rep(nclasses, dfa.size());
  for (std::size_t q = 0; q < dfa.size(); ++q) {
    if (rep[classes[q]] == dfa.size()) rep[classes[q]] = q;
  }
  std::vector<std::int64_t> number(nclasses, -1);
  std::vector<std::uint32_t> order;
  std::deque<std::uint32_t> queue;
  number[classes[dfa.start]] = 0;
  order.push_back(classes[dfa.start]);
  queue.push_back(classes[dfa.start]);
  while (!queue.empty()) {
    const auto c = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < k; ++a) {
      const auto t = classes[dfa.next(rep[c], a)];
      if (number[t] < 0) {
        number[t] = static_cast<std::int64_t>(order.size());
        order.push_back(t);
        queue.push_back(t);
      }
    }
  }
  Dfa out;
  out.alphabet = dfa.alphabet;
  out.start = 0;
  out.final.resize(order.size());
  out.delta.resize(order.size() * k);
  if (representative) representative->resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t r = rep[order[i]];
    out.final[i] = dfa.final[r];
    if (representative) (*representative)[i] = r;
    for (std::size_t a = 0; a < k; ++a) {
      out.delta[i * k + a] = static_cast<std::uint32_t>(number[classes[dfa.next(r, a)]]);
    }
  }
  return out;
}

Dfa minimize(const Dfa& dfa) {
  std::vector<std::uint64_t> labels(dfa.final.begin(), dfa.final.end());
  return quotient(dfa, hopcroft_classes(dfa, labels));
}

Dfa build_min_dfa(const PatternAst& ast) {
  Dfa dfa = minimize(determinize(ast));
  if (dfa.final_count() == 0) throw InputError("pattern language is empty");
  return dfa;
}

std::size_t OrderMDfa::chain_size() const {
  if (order == 0) return dfa.size();
  return static_cast<std::size_t>(
      std::count_if(backmap.begin(), backmap.end(), [](const auto& c) { return c.has_value(); }));
}

OrderMDfa make_order_m(const Dfa& dfa, unsigned order) {
  OrderMDfa out;
  out.order = order;
  if (order == 0) {
    out.dfa = dfa;
    return out;
  }
  const std::size_t k = dfa.alphabet.size();
  const std::size_t contexts = dfa.alphabet.context_count(order);

  // Product states (q, len, ctx) where ctx holds the last min(len, m) letters.
  struct Node {
    std::size_t q;
    unsigned len;
    std::size_t ctx;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::uint64_t, std::uint32_t> index;
  auto key = [&](const Node& n) {
    return (static_cast<std::uint64_t>(n.q) * (order + 1) + n.len) * contexts + n.ctx;
  };
  auto intern = [&](const Node& n) {
    auto [it, fresh] = index.emplace(key(n), static_cast<std::uint32_t>(nodes.size()));
    if (fresh) nodes.push_back(n);
    return it->second;
  };
  Dfa product;
  product.alphabet = dfa.alphabet;
  intern({dfa.start, 0, 0});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node n = nodes[i];
    product.final.push_back(dfa.final[n.q]);
    for (std::size_t a = 0; a < k; ++a) {
      Node t{dfa.next(n.q, a), std::min(n.len + 1, order), (n.ctx * k + a) % contexts};
      const auto target = intern(t);
      product.delta.push_back(target);
    }
  }

  // Full-length contexts get labels [0, contexts); transient states are
  // separated by (len, partial context).
  std::vector<std::uint64_t> labels(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    const std::uint64_t ctx_label =
        n.len == order ? n.ctx : contexts + static_cast<std::uint64_t>(n.len) * contexts + n.ctx;
    labels[i] = ctx_label * 2 + static_cast<std::uint64_t>(product.final[i]);
  }
  std::vector<std::size_t> rep;
  out.dfa = quotient(product, hopcroft_classes(product, labels), &rep);
  out.backmap.resize(out.dfa.size());
  for (std::size_t q = 0; q < out.dfa.size(); ++q) {
    const Node& n = nodes[rep[q]];
    if (n.len == order) out.backmap[q] = n.ctx;
  }
  return out;
}

std::vector<std::size_t> scan(const Dfa& dfa, std::string_view sequence) {
  std::vector<std::size_t> ends;
  std::size_t q = dfa.start;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    q = dfa.next(q, dfa.alphabet.index(sequence[i]));
    if (dfa.is_final(q)) ends.push_back(i + 1);
  }
  return ends;
}

std::size_t count_occurrences(const Dfa& dfa, const std::vector<std::size_t>& letters) {
  std::size_t count = 0;
  std::size_t q = dfa.start;
  for (auto a : letters) {
    q = dfa.next(q, a);
    count += dfa.is_final(q) ? 1 : 0;
  }
  return count;
}

std::string to_dot(const Dfa& dfa, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  init [shape=point];\n  init -> " << dfa.start << ";\n";
  for (std::size_t q = 0; q < dfa.size(); ++q) {
    if (dfa.is_final(q)) os << "  " << q << " [shape=doublecircle];\n";
  }
  for (std::size_t q = 0; q < dfa.size(); ++q) {
    std::map<std::size_t, std::string> edges;
    for (std::size_t a = 0; a < dfa.alphabet.size(); ++a) {
      auto& label = edges[dfa.next(q, a)];
      if (!label.empty()) label += ",";
      label += dfa.alphabet.letter(a);
    }
    for (const auto& [t, label] : edges) {
      os << "  " << q << " -> " << t << " [label=\"" << label << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace patdist
