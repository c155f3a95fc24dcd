#include "patdist/oracle.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "patdist/error.hpp"

namespace patdist {

namespace {

constexpr unsigned kShards = 16;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_pair(const OrderMDfa& automaton, const MarkovModel& model) {
  if (automaton.order != model.order) throw InputError("model order differs from automaton order");
  if (!(automaton.dfa.alphabet == model.alphabet)) throw InputError("alphabets differ");
}

struct Enumerator {
  const Dfa& dfa;
  const MarkovModel& model;
  std::size_t length;
  std::size_t contexts;
  std::vector<BigRational>& out;

  void walk(std::size_t pos, std::size_t q, std::size_t ctx, std::size_t count, const BigRational& w) {
    if (pos == length) {
      out[count] += w;
      return;
    }
    const std::size_t k = dfa.alphabet.size();
    for (std::size_t b = 0; b < k; ++b) {
      BigRational pb;
      if (pos < model.order) {
        pb = 1;  // initial block weighted at its end
      } else {
        if (!model.defined[ctx]) throw InputError("sequence reaches an undefined context");
        pb = model.prob(ctx, b);
      }
      if (pb == 0) continue;
      const std::size_t q2 = dfa.next(q, b);
      const std::size_t ctx2 = contexts == 1 ? 0 : (ctx * k + b) % contexts;
      BigRational w2 = w * pb;
      if (pos + 1 == model.order) {
        w2 *= model.initial[ctx2];
        if (w2 == 0) continue;
      }
      const bool counted = pos + 1 > model.order && dfa.is_final(q2);
      walk(pos + 1, q2, ctx2, count + (counted ? 1 : 0), w2);
    }
  }
};

// Per-context cumulative thresholds on 2^64.
std::vector<std::uint64_t> thresholds(const std::vector<BigRational>& probs) {
  std::vector<std::uint64_t> t;
  BigRational cum = 0;
  const BigInt two64 = BigInt(1) << 64;
  for (std::size_t b = 0; b < probs.size(); ++b) {
    cum += probs[b];
    BigRational scaled = cum * two64;
    BigInt c;
    mpz_cdiv_q(c.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    t.push_back(c >= two64 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(mpz_get_ui(c.get_mpz_t())));
  }
  return t;
}

std::size_t draw(const std::vector<std::uint64_t>& t, std::size_t offset, std::size_t k,
                 std::uint64_t r) {
  for (std::size_t b = 0; b + 1 < k; ++b) {
    if (r < t[offset + b]) return b;
  }
  return k - 1;
}

}  // namespace

OracleResult exhaustive(const OrderMDfa& automaton, const MarkovModel& model, std::size_t length,
                        std::uint64_t budget) {
  check_pair(automaton, model);
  if (length < model.order) throw InputError("length below model order");
  const std::size_t k = model.alphabet.size();
  long double total = 1;
  for (std::size_t i = 0; i < length; ++i) total *= static_cast<long double>(k);
  if (total > static_cast<long double>(budget)) {
    throw InputError("exhaustive enumeration of " + std::to_string(k) + "^" +
                     std::to_string(length) + " sequences exceeds the budget");
  }
  OracleResult r;
  r.exact.assign(length - model.order + 1, BigRational(0));
  Enumerator e{automaton.dfa, model, length, model.context_count(), r.exact};
  e.walk(0, automaton.dfa.start, 0, 0, BigRational(1));
  r.samples = static_cast<std::uint64_t>(total);
  return r;
}

OracleResult monte_carlo(const OrderMDfa& automaton, const MarkovModel& model, std::size_t length,
                         std::uint64_t samples, std::uint64_t seed, unsigned jobs) {
  check_pair(automaton, model);
  if (samples == 0) throw InputError("need at least one sample");
  if (length < model.order) throw InputError("length below model order");
  const std::size_t k = model.alphabet.size();
  const std::size_t contexts = model.context_count();
  const Dfa& dfa = automaton.dfa;
  std::vector<std::uint64_t> trans;
  for (std::size_t c = 0; c < contexts; ++c) {
    std::vector<BigRational> row(model.transition.begin() + static_cast<long>(c * k),
                                 model.transition.begin() + static_cast<long>((c + 1) * k));
    auto t = thresholds(row);
    trans.insert(trans.end(), t.begin(), t.end());
  }
  const std::vector<std::uint64_t> init = model.order > 0 ? thresholds(model.initial)
                                                          : std::vector<std::uint64_t>{};
  const std::size_t max_count = length - model.order;

  std::vector<std::vector<std::uint64_t>> shard_counts(kShards,
                                                       std::vector<std::uint64_t>(max_count + 1, 0));
  auto run_shard = [&](unsigned s) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(s + 1)));
    const std::uint64_t share = samples / kShards + (s < samples % kShards ? 1 : 0);
    for (std::uint64_t i = 0; i < share; ++i) {
      std::size_t q = dfa.start, ctx = 0, count = 0;
      if (model.order > 0) {
        ctx = draw(init, 0, contexts, rng());
        const std::string w = model.alphabet.context_word(ctx, model.order);
        for (char c : w) q = dfa.next(q, model.alphabet.index(c));
      }
      for (std::size_t pos = model.order; pos < length; ++pos) {
        if (!model.defined[ctx]) throw InputError("simulation reached an undefined context");
        const std::size_t b = draw(trans, ctx * k, k, rng());
        q = dfa.next(q, b);
        if (dfa.is_final(q)) ++count;
        ctx = contexts == 1 ? 0 : (ctx * k + b) % contexts;
      }
      ++shard_counts[s][count];
    }
  };
  jobs = std::max(1u, std::min(jobs, kShards));
  if (jobs == 1) {
    for (unsigned s = 0; s < kShards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (unsigned s = w; s < kShards; s += jobs) run_shard(s);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  OracleResult r;
  r.samples = samples;
  r.counts.assign(max_count + 1, 0);
  for (const auto& sc : shard_counts)
    for (std::size_t c = 0; c <= max_count; ++c) r.counts[c] += sc[c];
  for (auto c : r.counts) {
    const double p = static_cast<double>(c) / static_cast<double>(samples);
    r.estimate.push_back(p);
    r.standard_error.push_back(std::sqrt(p * (1 - p) / static_cast<double>(samples)));
  }
  return r;
}

}  // namespace patdist
