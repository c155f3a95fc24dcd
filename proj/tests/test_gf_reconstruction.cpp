#include <random>
#include <sstream>

#include "doctest.h"
#include "patdist/automaton.hpp"
#include "patdist/embedding.hpp"
#include "patdist/error.hpp"
#include "patdist/gf.hpp"
#include "patdist/reconstruct.hpp"

using namespace patdist;

namespace {

EmbeddedChain uniform_chain(const std::string& pattern, const Alphabet& a) {
  return embed(make_order_m(build_min_dfa(parse_pattern(pattern, a)), 0), uniform_iid(a));
}

Fp eval_mod(const std::vector<BigRational>& poly, const Fp& y) {
  Fp acc = zero_like(y);
  for (std::size_t k = poly.size(); k-- > 0;) {
    Fp c = zero_like(y);
    REQUIRE(reduce_mod(poly[k], y.modulus(), c));
    acc = acc * y + c;
  }
  return acc;
}

}  // namespace

TEST_CASE("degree probe") {
  const Alphabet abcd("ABCD");
  auto r = probe_degree(uniform_chain("ADAD", abcd), 5);
  CHECK(r.degree == 4);
  CHECK(r.numerator_degree == 2);
  CHECK(r.denominator_degree == 4);
  CHECK(probe_degree(uniform_chain("AD(A|D){2}AD", abcd), 9).degree == 8);
}

TEST_CASE("reconstruction of the ADAD fraction") {
  const Alphabet abcd("ABCD");
  const EmbeddedChain chain = uniform_chain("ADAD", abcd);
  ReconstructStats stats;
  BivariateFraction f = find_gf(chain, {}, &stats);
  CHECK(f.numerator_degree() == 2);
  CHECK(f.denominator_degree() == 4);
  CHECK(f.y_degree() <= f.degree());
  CHECK(stats.primes_used >= 1);
  CHECK(verify(f, chain, 2 * f.degree()));
  CHECK(f.denominator[1] == std::vector<BigRational>{BigRational(-1)});

  SUBCASE("perturbed coefficient fails verification") {
    BivariateFraction g = f;
    g.numerator.back().back() += BigRational(1, 1000003);
    CHECK_FALSE(verify(g, chain, 2 * g.degree()));
  }
  SUBCASE("images agree with univariate reconstruction modulo a prime") {
    const std::uint64_t p = 1000000007ULL;
    auto view = reduce_chain(chain, p);
    REQUIRE(view);
    for (std::uint64_t y : {3ULL, 17ULL, 999ULL}) {
      const Fp y0(y, p);
      auto uni = fraction_reconstruct(series_at(*view, 2 * f.degree(), y0), f.degree());
      for (std::size_t i = 0; i < f.denominator.size(); ++i) {
        CHECK(eval_mod(f.denominator[i], y0) == uni.denominator.coeff(i));
      }
      for (std::size_t i = 0; i < f.numerator.size(); ++i) {
        CHECK(eval_mod(f.numerator[i], y0) == uni.numerator.coeff(i));
      }
    }
  }
  SUBCASE("file round trip") {
    std::stringstream io;
    save_fraction(f, {"ABCD", "ADAD", 0xabcdefULL}, io);
    FractionKey key;
    BivariateFraction g = load_fraction(io, &key);
    CHECK(key.pattern == "ADAD");
    CHECK(key.alphabet == "ABCD");
    CHECK(key.model_hash == 0xabcdefULL);
    CHECK(g.order == f.order);
    CHECK(verify(g, chain, 4));
    std::istringstream bad("patdist-fraction 1\ndegrees 1 1\nA 0 0 2\n");
    CHECK_THROWS_AS(load_fraction(bad), InputError);
    std::istringstream junk("hello\n");
    CHECK_THROWS_AS(load_fraction(junk), InputError);
  }
}

TEST_CASE("reconstruction degrees for the gapped motif") {
  const Alphabet abcd("ABCD");
  const EmbeddedChain chain = uniform_chain("AD(A|D){2}AD", abcd);
  BivariateFraction f = find_gf(chain);
  CHECK(f.numerator_degree() == 6);
  CHECK(f.denominator_degree() == 8);
  CHECK(verify(f, chain, 2 * f.degree()));
}

TEST_CASE("single-state chain gives z^m / (1 - yz)") {
  const Alphabet a("A");
  const MarkovModel model = fit_mle(std::string("AAAA"), a, 1);
  const EmbeddedChain chain =
      embed(make_order_m(build_min_dfa(parse_pattern("A", a)), 1), model);
  BivariateFraction f = find_gf(chain);
  CHECK(f.order == 1);
  REQUIRE(f.numerator.size() == 1);
  CHECK(f.numerator[0] == std::vector<BigRational>{BigRational(1)});
  REQUIRE(f.denominator.size() == 2);
  CHECK(f.denominator[1] == std::vector<BigRational>{BigRational(0), BigRational(-1)});
}

TEST_CASE("raising a too-small degree bound") {
  const Alphabet abcd("ABCD");
  const EmbeddedChain chain = uniform_chain("ADAD", abcd);
  BivariateFraction f = reconstruct_gf(chain, 1);
  CHECK(f.denominator_degree() == 4);
  CHECK(verify(f, chain, 8));
}

TEST_CASE("memory guard") {
  const Alphabet abcd("ABCD");
  ReconstructOptions opts;
  opts.memory_budget_bytes = 100;
  CHECK_THROWS_AS(reconstruct_gf(uniform_chain("ADAD", abcd), 4, opts), MemoryBudgetError);
  CHECK(series_memory_estimate(uniform_chain("ADAD", abcd), 20) > 0);
}

TEST_CASE("random patterns and higher-order models verify") {
  std::mt19937_64 rng(4242);
  const Alphabet ab("AB"), acgt("ACGT");
  const std::vector<std::pair<std::string, const Alphabet*>> cases = {
      {"ABA", &ab}, {"A(A|B)B+", &ab}, {"BB.A", &ab}, {"GA(T|C)", &acgt}, {"CG", &acgt}};
  for (const auto& [pattern, alphabet] : cases) {
    for (unsigned m = 0; m <= 2; ++m) {
      std::string seq;
      for (int i = 0; i < 300; ++i) seq += alphabet->letter(rng() % alphabet->size());
      for (std::size_t c = 0; c < alphabet->context_count(m + 1); ++c) {
        seq += alphabet->context_word(c, m + 1);
      }
      const MarkovModel model = fit_mle(seq, *alphabet, m);
      const EmbeddedChain chain =
          embed(make_order_m(build_min_dfa(parse_pattern(pattern, *alphabet)), m), model);
      CAPTURE(pattern);
      CAPTURE(m);
      BivariateFraction f = find_gf(chain);
      CHECK(f.order == m);
      CHECK(f.degree() <= chain.size());
      CHECK(verify(f, chain, 2 * f.degree() + 5));
    }
  }
}
