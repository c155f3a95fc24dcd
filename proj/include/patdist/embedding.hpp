#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "patdist/automaton.hpp"
#include "patdist/ext_float.hpp"
#include "patdist/markov.hpp"
#include "patdist/prime_field.hpp"
#include "patdist/rational.hpp"

namespace patdist {

// Compressed sparse rows.
template <typename T>
struct SparseMatrix {
  std::size_t dim = 0;
  std::vector<std::size_t> row_start;  // size dim + 1
  std::vector<std::uint32_t> col;
  std::vector<T> val;

  std::size_t nonzeros() const { return col.size(); }

  template <typename F>
  auto map(F&& f) const -> SparseMatrix<decltype(f(val.front()))> {
    SparseMatrix<decltype(f(val.front()))> out;
    out.dim = dim;
    out.row_start = row_start;
    out.col = col;
    out.val.reserve(val.size());
    for (const auto& v : val) out.val.push_back(f(v));
    return out;
  }
};

// Markov chain on automaton states: u is the law of the state after the
// first m letters, P holds transitions into non-final states and Q
// transitions into final states, so the y-degree counts occurrences. The
// summing vector v (all ones) is implicit.
struct EmbeddedChain {
  unsigned order = 0;
  std::vector<BigRational> u;
  SparseMatrix<BigRational> P;
  SparseMatrix<BigRational> Q;
  // Chain state -> order-m automaton state.
  std::vector<std::size_t> automaton_state;

  std::size_t size() const { return u.size(); }
};

// The chain state space is restricted to states reachable with positive
// probability from the support of u. Throws InputError when the model order
// differs from the automaton's or a reachable context has no transition row.
EmbeddedChain embed(const OrderMDfa& automaton, const MarkovModel& model);

// Same chain with values converted to another ring.
template <typename T>
struct ChainView {
  std::vector<T> u;
  SparseMatrix<T> P;
  SparseMatrix<T> Q;
};

ChainView<ExtFloat> to_float(const EmbeddedChain& chain, mpfr_prec_t precision);
// nullopt when p divides some denominator.
std::optional<ChainView<Fp>> reduce_chain(const EmbeddedChain& chain, std::uint64_t p);

// g_0 .. g_count with g_i(y) = u (P + yQ)^i v, the coefficient of z^(m+i) in
// the bivariate generating function. When ytrunc is set, coefficients of
// y^k for k > ytrunc are dropped. g_i has min(i, ytrunc) + 1 entries.
std::vector<std::vector<BigRational>> series_prefix(const EmbeddedChain& chain, std::size_t count,
                                                    std::optional<std::size_t> ytrunc = {});

// Scalar series u (P + y0 Q)^i v for i = 0..count in any ring.
template <typename T>
std::vector<T> series_at(const ChainView<T>& chain, std::size_t count, const T& y0) {
  const std::size_t n = chain.u.size();
  const T zero = zero_like(y0);
  std::vector<T> v(n, one_like(y0)), w(n, zero);
  std::vector<T> out;
  out.reserve(count + 1);
  for (std::size_t i = 0;; ++i) {
    T g = zero;
    for (std::size_t p = 0; p < n; ++p) g += chain.u[p] * v[p];
    out.push_back(g);
    if (i == count) break;
    for (std::size_t p = 0; p < n; ++p) {
      T a = zero, b = zero;
      for (auto e = chain.P.row_start[p]; e < chain.P.row_start[p + 1]; ++e) {
        a += chain.P.val[e] * v[chain.P.col[e]];
      }
      for (auto e = chain.Q.row_start[p]; e < chain.Q.row_start[p + 1]; ++e) {
        b += chain.Q.val[e] * v[chain.Q.col[e]];
      }
      w[p] = a + y0 * b;
    }
    std::swap(v, w);
  }
  return out;
}

// Sum of a distribution over n = 0..L equals one: exactly for rationals,
// within 2^(-precision/2) for floats.
bool distribution_identity_check(const std::vector<BigRational>& dist);
bool distribution_identity_check(const std::vector<ExtFloat>& dist);

}  // namespace patdist
