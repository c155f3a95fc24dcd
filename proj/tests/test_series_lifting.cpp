#include <random>

#include "doctest.h"
#include "patdist/automaton.hpp"
#include "patdist/embedding.hpp"
#include "patdist/gf.hpp"
#include "patdist/lifting.hpp"
#include "patdist/recursion.hpp"

using namespace patdist;

namespace {

using Q = BigRational;
using Poly = std::vector<Q>;

// Plain expansion of B/A to `count` terms.
Poly naive(const Poly& a, const Poly& b, std::size_t count) {
  Poly t(count, Q(0));
  for (std::size_t k = 0; k < count; ++k) {
    Q v = k < b.size() ? b[k] : Q(0);
    for (std::size_t i = 1; i < a.size() && i <= k; ++i) v -= a[i] * t[k - i];
    t[k] = v;
  }
  return t;
}

Poly random_poly(std::mt19937_64& rng, std::size_t size, bool monic_constant, bool rational) {
  Poly p;
  for (std::size_t i = 0; i < size; ++i) {
    long num = static_cast<long>(rng() % 7) - 3;
    long den = rational ? static_cast<long>(rng() % 5) + 1 : 1;
    p.push_back(Q(num, den));
    p.back().canonicalize();
  }
  if (monic_constant) p[0] = 1;
  if (p.size() > 1 && p.back() == 0) p.back() = 1;
  return p;
}

std::vector<Q> window(const Poly& t, long lo, long hi) {
  std::vector<Q> out;
  for (long i = lo; i <= hi; ++i) out.push_back(i < 0 ? Q(0) : t[static_cast<std::size_t>(i)]);
  return out;
}

EmbeddedChain uniform_chain(const std::string& pattern, const Alphabet& a) {
  return embed(make_order_m(build_min_dfa(parse_pattern(pattern, a)), 0), uniform_iid(a));
}

}  // namespace

TEST_CASE("residue") {
  const Poly geo{1, -1};
  CHECK(residue(geo, Poly{1}, 0, Chunk<Q>{}, 1) == Poly{1});
  for (long j : {1L, 5L, 77L}) {
    Chunk<Q> v{j - 1, {Q(1)}};
    CHECK(residue(geo, Poly{1}, j, v, 1) == Poly{1});
  }
  std::mt19937_64 rng(3);
  const Poly a = random_poly(rng, 7, true, true);
  const Poly b = random_poly(rng, 6, false, true);
  const std::size_t d = 6;
  const Poly s = naive(a, Poly{1}, 60);
  const Poly t = naive(a, b, 60);
  const long j = 50;
  const auto r = residue(a, b, j, Chunk<Q>{j - 11, window(s, j - 11, j - 1)}, d);
  // B - A * prefix, shifted down by j.
  Poly rem(b);
  rem.resize(70, Q(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (long k = 0; k < j; ++k) rem[i + static_cast<std::size_t>(k)] -= a[i] * t[static_cast<std::size_t>(k)];
  }
  for (std::size_t k = 0; k < d; ++k) CHECK(r[k] == rem[static_cast<std::size_t>(j) + k]);
  for (std::size_t k = static_cast<std::size_t>(j) + d; k < rem.size(); ++k) CHECK(rem[k] == 0);
  CHECK_THROWS_AS(residue(a, b, j, Chunk<Q>{j - 10, window(s, j - 10, j - 1)}, d), InputError);
}

TEST_CASE("double order") {
  const Poly geo{1, -1};
  Chunk<Q> v{1, {Q(1)}};
  std::vector<Q> g{Q(1)};
  for (unsigned e = 1; e < 8; ++e) {
    auto [g2, v2] = double_order(geo, Poly{1}, v, g, e, 1);
    CHECK(g2 == std::vector<Q>{Q(1)});
    CHECK(v2.coeffs == std::vector<Q>{Q(1)});
    g = g2;
    v = v2;
  }
  std::mt19937_64 rng(11);
  const Poly a = random_poly(rng, 7, true, true);
  const std::size_t d = 6;
  const Poly s = naive(a, Poly{1}, 80);
  // Gamma_10 from the expansion, then one doubling to Gamma_26.
  Chunk<Q> u{4, window(s, 4, 9)};
  const Poly one{1};
  auto gamma10 = lifting_detail::residue_from(a, one, 10, u, d);
  auto [g26, v5] = double_order(a, s, Chunk<Q>{5, window(s, 5, 15)}, gamma10, 4, d);
  CHECK(v5.alpha == 21);
  CHECK(v5.coeffs.size() == 2 * d - 1);
  CHECK(v5.coeffs == window(s, 21, 31));
  Chunk<Q> u26{20, window(s, 20, 25)};
  CHECK(g26 == lifting_detail::residue_from(a, one, 26, u26, d));
}

TEST_CASE("high-order ladder") {
  std::mt19937_64 rng(5);
  const Poly a = random_poly(rng, 7, true, true);
  auto ho = high_order(a, 950, 1000);
  CHECK(ho.d == 6);
  CHECK(ho.gamma_orders() == std::vector<std::size_t>{10, 26, 58, 122, 250, 506});
  CHECK(ho.delta == 50);
  auto geo = high_order(Poly{1, -1}, 0, 100);
  for (const auto& g : geo.gamma) CHECK(g == std::vector<Q>{Q(1)});
  for (std::size_t d = 1; d <= 64; ++d) {
    Poly p(d + 1, Q(0));
    p[0] = 1;
    p[d] = 1;
    auto h = high_order(p, 0, 4 * d);
    CHECK((std::size_t{1} << (h.e0 - 1)) < 2 * d);
    CHECK(2 * d <= (std::size_t{1} << h.e0));
  }
  CHECK_THROWS_AS(high_order(Poly{2, 1}, 0, 10), InputError);
}

TEST_CASE("development chunks") {
  const Poly geo{1, -1};
  {
    auto ho = high_order(geo, 100, 105);
    CHECK(devel_chunk(ho, Poly{1}, 100, 105).coeffs == std::vector<Q>(6, Q(1)));
  }
  const Poly fa{1, -1, -1}, fb{0, 1};
  {
    auto ho = high_order(fa, 30, 30);
    CHECK(devel_chunk(ho, fb, 30, 30).coeffs.front() == 832040);
    CHECK(fiduccia_chunk(fa, fb, 30, 30).coeffs.front() == 832040);
  }
  CHECK(fiduccia_chunk(geo, Poly{1}, 7, 20).coeffs == std::vector<Q>(14, Q(1)));

  std::mt19937_64 rng(17);
  const Poly a = random_poly(rng, 7, true, true);
  const Poly b = random_poly(rng, 6, false, true);
  const Poly t = naive(a, b, 1001);
  auto ho = high_order(a, 950, 1000);
  CHECK(devel_chunk(ho, b, 950, 1000).coeffs == window(t, 950, 1000));
  CHECK(fiduccia_chunk(a, b, 950, 1000).coeffs == window(t, 950, 1000));
  CHECK_THROWS_AS(devel_chunk(ho, b, 900, 1000), InputError);
  CHECK_THROWS_AS(devel_chunk(ho, b, 5000, 5001), InputError);
}

TEST_CASE("chunk gluing and residue identity") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 1 + rng() % 6;
    const Poly a = random_poly(rng, d + 1, true, false);
    const Poly b = random_poly(rng, d, false, false);
    const std::size_t alpha = 200 + rng() % 300, mid = alpha + rng() % 20, gamma = mid + 1 + rng() % 20;
    auto ho = high_order(a, alpha, gamma, d);
    auto whole = devel_chunk(ho, b, alpha, gamma).coeffs;
    auto left = devel_chunk(ho, b, alpha, mid).coeffs;
    auto right = devel_chunk(ho, b, mid + 1, gamma).coeffs;
    left.insert(left.end(), right.begin(), right.end());
    CHECK(left == whole);

    // Residue identity: B - A * prefix_l = z^l B_l with B_l from the chunk engine.
    const long l = static_cast<long>(alpha);
    const Poly t = naive(a, b, alpha + 2 * d);
    lifting_detail::ChunkEngine<Q> engine(ho);
    const auto bl = engine.residue(b, l);
    Poly rem(b);
    rem.resize(alpha + 2 * d + 1, Q(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (long k = 0; k < l; ++k) rem[i + static_cast<std::size_t>(k)] -= a[i] * t[static_cast<std::size_t>(k)];
    }
    for (long k = 0; k < l; ++k) CHECK(rem[static_cast<std::size_t>(k)] == 0);
    for (std::size_t k = 0; k < d; ++k) CHECK(bl[k] == rem[alpha + k]);
  }
}

TEST_CASE("lifting, Fiduccia and naive expansion agree exactly") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng() % 8;
    const Poly a = random_poly(rng, d + 1, true, trial % 2 == 0);
    const Poly b = random_poly(rng, 1 + rng() % d, false, trial % 3 == 0);
    const std::size_t order = trial < 4 ? 10000 - static_cast<std::size_t>(trial) : 1 + rng() % 3000;
    const Poly t = naive(a, b, order + 1);
    auto ho = high_order(a, order, order, nominal_degree(a, b));
    const Q lifted = devel_chunk(ho, b, order, order).coeffs.front();
    CAPTURE(trial);
    CHECK(lifted == t[order]);
    CHECK(fiduccia_chunk(a, b, order, order).coeffs.front() == t[order]);
  }
}

TEST_CASE("bivariate lifting") {
  const Alphabet abcd("ABCD");
  const EmbeddedChain chain = uniform_chain("ADAD", abcd);
  const BivariateFraction f = find_gf(chain);

  SUBCASE("published value") {
    auto fl = bivariate_lift(f, 2000, 10);
    CHECK(fl.values[10].to_string(6) == "9.12559e-02");
    LiftOptions ex;
    ex.exact = true;
    auto exact = bivariate_lift(f, 2000, 10, ex);
    CHECK(exact.values[10].to_string(6) == "9.12559e-02");
    CHECK(relative_difference(exact.values[10], fl.values[10]).to_double() < 1e-100);
    LiftOptions fid;
    fid.method = LiftMethod::kFiduccia;
    CHECK(relative_difference(bivariate_lift(f, 2000, 10, fid).values[10], fl.values[10]).to_double() <
          1e-100);
  }
  SUBCASE("equals full recursion") {
    LiftOptions ex;
    ex.exact = true;
    for (std::size_t len : {0u, 3u, 4u, 17u, 250u}) {
      auto full = full_distribution(chain, len, 6, true);
      auto lifted = bivariate_lift(f, len, 6, ex);
      CHECK(*lifted.exact == *full.exact);
      auto fl = bivariate_lift(f, len, 6);
      for (std::size_t k = 0; k <= 6; ++k) {
        if (full.values[k].is_zero()) continue;
        CHECK(relative_difference(fl.values[k], full.values[k]).to_double() < 1e-12);
      }
    }
  }
  SUBCASE("order-2 gapped motif against full recursion") {
    std::mt19937_64 rng(8);
    std::string seq;
    for (int i = 0; i < 500; ++i) seq += abcd.letter(rng() % 4);
    for (std::size_t c = 0; c < abcd.context_count(3); ++c) seq += abcd.context_word(c, 3);
    const MarkovModel model = fit_mle(seq, abcd, 2);
    const EmbeddedChain ch = embed(make_order_m(build_min_dfa(parse_pattern("AD(A|D)AD", abcd)), 2), model);
    const BivariateFraction g = find_gf(ch);
    LiftOptions ex;
    ex.exact = true;
    for (std::size_t len : {2u, 9u, 120u}) {
      CHECK(*bivariate_lift(g, len, 4, ex).exact == *full_distribution(ch, len, 4, true).exact);
    }
    CHECK_THROWS_AS(bivariate_lift(g, 1, 4), InputError);
  }
  SUBCASE("single-state chain is a point mass") {
    const Alphabet a("A");
    const EmbeddedChain one =
        embed(make_order_m(build_min_dfa(parse_pattern("A", a)), 1), fit_mle(std::string("AAA"), a, 1));
    const BivariateFraction g = find_gf(one);
    LiftOptions ex;
    ex.exact = true;
    auto r = bivariate_lift(g, 6, 8, ex);
    for (std::size_t k = 0; k <= 8; ++k) CHECK((*r.exact)[k] == (k == 5 ? 1 : 0));
  }
}
