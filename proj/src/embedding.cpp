#include "patdist/embedding.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "patdist/error.hpp"

namespace patdist {

EmbeddedChain embed(const OrderMDfa& automaton, const MarkovModel& model) {
  const Dfa& dfa = automaton.dfa;
  if (automaton.order != model.order) {
    throw InputError("model order " + std::to_string(model.order) + " differs from automaton order " +
                     std::to_string(automaton.order));
  }
  if (!(dfa.alphabet == model.alphabet)) throw InputError("model and pattern alphabets differ");
  const std::size_t k = dfa.alphabet.size();

  // Law of the automaton state after the first m letters.
  std::vector<BigRational> start_law(dfa.size(), BigRational(0));
  if (model.order == 0) {
    start_law[dfa.start] = 1;
  } else {
    for (std::size_t c = 0; c < model.initial.size(); ++c) {
      if (model.initial[c] == 0) continue;
      std::size_t q = dfa.start;
      const std::string word = dfa.alphabet.context_word(c, model.order);
      for (char ch : word) q = dfa.next(q, dfa.alphabet.index(ch));
      start_law[q] += model.initial[c];
    }
  }

  std::vector<char> reached(dfa.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t q = 0; q < dfa.size(); ++q) {
    if (start_law[q] != 0) {
      reached[q] = 1;
      queue.push_back(q);
    }
  }
  if (queue.empty()) throw InputError("initial distribution is empty");
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    const std::size_t ctx = automaton.context(p);
    if (!model.defined[ctx]) {
      throw InputError("model has no transition row for reachable context " +
                       (model.order == 0 ? std::string("-")
                                         : dfa.alphabet.context_word(ctx, model.order)));
    }
    for (std::size_t b = 0; b < k; ++b) {
      if (model.prob(ctx, b) == 0) continue;
      const std::size_t q = dfa.next(p, b);
      if (!reached[q]) {
        reached[q] = 1;
        queue.push_back(q);
      }
    }
  }

  EmbeddedChain chain;
  chain.order = model.order;
  std::vector<std::int64_t> index(dfa.size(), -1);
  for (std::size_t q = 0; q < dfa.size(); ++q) {
    if (reached[q]) {
      index[q] = static_cast<std::int64_t>(chain.automaton_state.size());
      chain.automaton_state.push_back(q);
      chain.u.push_back(start_law[q]);
    }
  }
  const std::size_t n = chain.size();
  for (auto* m : {&chain.P, &chain.Q}) {
    m->dim = n;
    m->row_start.assign(1, 0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t p = chain.automaton_state[i];
    const std::size_t ctx = automaton.context(p);
    std::map<std::uint32_t, BigRational> row_p, row_q;
    for (std::size_t b = 0; b < k; ++b) {
      const BigRational& pr = model.prob(ctx, b);
      if (pr == 0) continue;
      const std::size_t q = dfa.next(p, b);
      auto& row = dfa.is_final(q) ? row_q : row_p;
      row[static_cast<std::uint32_t>(index[q])] += pr;
    }
    for (auto [m, row] : {std::pair{&chain.P, &row_p}, std::pair{&chain.Q, &row_q}}) {
      for (auto& [c, v] : *row) {
        m->col.push_back(c);
        m->val.push_back(v);
      }
      m->row_start.push_back(m->col.size());
    }
  }
  return chain;
}

ChainView<ExtFloat> to_float(const EmbeddedChain& chain, mpfr_prec_t precision) {
  auto conv = [precision](const BigRational& q) { return ExtFloat(q, precision); };
  ChainView<ExtFloat> out{{}, chain.P.map(conv), chain.Q.map(conv)};
  for (const auto& x : chain.u) out.u.push_back(conv(x));
  return out;
}

std::optional<ChainView<Fp>> reduce_chain(const EmbeddedChain& chain, std::uint64_t p) {
  bool ok = true;
  auto conv = [&](const BigRational& q) {
    Fp r(0, p);
    if (!reduce_mod(q, p, r)) ok = false;
    return r;
  };
  ChainView<Fp> out{{}, chain.P.map(conv), chain.Q.map(conv)};
  for (const auto& x : chain.u) out.u.push_back(conv(x));
  if (!ok) return std::nullopt;
  return out;
}

std::vector<std::vector<BigRational>> series_prefix(const EmbeddedChain& chain, std::size_t count,
                                                    std::optional<std::size_t> ytrunc) {
  const std::size_t n = chain.size();
  const std::size_t cap = ytrunc ? *ytrunc + 1 : count + 1;
  std::vector<std::vector<BigRational>> v(n, std::vector<BigRational>{1}), w(n);
  std::vector<std::vector<BigRational>> out;
  out.reserve(count + 1);
  for (std::size_t i = 0;; ++i) {
    std::vector<BigRational> g(std::min(i + 1, cap), BigRational(0));
    for (std::size_t p = 0; p < n; ++p) {
      if (chain.u[p] == 0) continue;
      for (std::size_t d = 0; d < v[p].size(); ++d) g[d] += chain.u[p] * v[p][d];
    }
    out.push_back(std::move(g));
    if (i == count) break;
    const std::size_t len = std::min(i + 2, cap);
    for (std::size_t p = 0; p < n; ++p) {
      std::vector<BigRational>& acc = w[p];
      acc.assign(len, BigRational(0));
      for (auto e = chain.P.row_start[p]; e < chain.P.row_start[p + 1]; ++e) {
        const auto& src = v[chain.P.col[e]];
        for (std::size_t d = 0; d < src.size(); ++d) acc[d] += chain.P.val[e] * src[d];
      }
      for (auto e = chain.Q.row_start[p]; e < chain.Q.row_start[p + 1]; ++e) {
        const auto& src = v[chain.Q.col[e]];
        for (std::size_t d = 0; d + 1 < len && d < src.size(); ++d) {
          acc[d + 1] += chain.Q.val[e] * src[d];
        }
      }
    }
    std::swap(v, w);
  }
  return out;
}

bool distribution_identity_check(const std::vector<BigRational>& dist) {
  BigRational sum = 0;
  for (const auto& x : dist) sum += x;
  return sum == 1;
}

bool distribution_identity_check(const std::vector<ExtFloat>& dist) {
  if (dist.empty()) return false;
  const mpfr_prec_t prec = dist.front().precision();
  ExtFloat sum(prec);
  for (const auto& x : dist) sum += x;
  ExtFloat tol = ExtFloat::from_long(1, prec);
  for (mpfr_prec_t i = 0; i < prec / 2; ++i) tol /= 2UL;
  return abs(sum - ExtFloat::from_long(1, prec)) <= tol;
}

}  // namespace patdist
