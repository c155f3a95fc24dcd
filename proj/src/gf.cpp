#include "patdist/gf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "patdist/error.hpp"
#include "patdist/reconstruct.hpp"

namespace patdist {

namespace {

std::size_t entry_height(const EmbeddedChain& chain) {
  std::size_t h = 1;
  for (const auto& x : chain.u) h = std::max(h, bit_size(x));
  for (const auto& x : chain.P.val) h = std::max(h, bit_size(x));
  for (const auto& x : chain.Q.val) h = std::max(h, bit_size(x));
  return h;
}

using FpFraction = PolyFraction<Fp>;

std::optional<FpFraction> try_fraction(const std::vector<Fp>& s, std::size_t d) {
  try {
    return fraction_reconstruct(s, d);
  } catch (const ReconstructionError&) {
    return std::nullopt;
  }
}

// A * s == B modulo z^(s.size()).
bool residual_ok(const FpFraction& f, const std::vector<Fp>& s) {
  const Fp zero = zero_like(s.front());
  for (std::size_t i = 0; i < s.size(); ++i) {
    Fp acc = zero;
    const std::size_t top = std::min<std::size_t>(i, std::max<long>(f.denominator.degree(), 0));
    for (std::size_t j = 0; j <= top; ++j) acc += f.denominator.coeff(j) * s[i - j];
    if (!(acc == f.numerator.coeff(i))) return false;
  }
  return true;
}

// Image of the fraction modulo one prime: coefficient [z^i y^k].
struct PrimeImage {
  std::uint64_t prime = 0;
  long deg_num = -1;
  long deg_den = 0;
  std::vector<std::vector<std::uint64_t>> num, den;
};

struct PointImage {
  std::uint64_t y;
  FpFraction f;
};

// Fraction images at y = 0, 1, 2, ... until d + 1 points share the largest
// degrees seen; points with smaller degrees are dropped (degree drop or
// accidental cancellation there).
std::optional<PrimeImage> image_mod(const std::vector<std::vector<BigRational>>& series,
                                    std::size_t d, std::uint64_t p, std::size_t* discarded) {
  const std::size_t terms = 2 * d + 1;
  std::vector<std::vector<Fp>> red(terms);
  for (std::size_t i = 0; i < terms; ++i) {
    for (const auto& c : series[i]) {
      Fp r(0, p);
      if (!reduce_mod(c, p, r)) return std::nullopt;
      red[i].push_back(r);
    }
  }
  std::vector<PointImage> pts;
  long best_num = -1, best_den = -1;
  auto good = [&](const PointImage& x) {
    return x.f.numerator.degree() == best_num && x.f.denominator.degree() == best_den;
  };
  const std::size_t limit = 4 * (d + 1) + 64;
  for (std::uint64_t y = 0; y < limit; ++y) {
    const Fp y0(y, p);
    std::vector<Fp> s;
    s.reserve(terms);
    for (const auto& g : red) {
      Fp acc(0, p);
      for (std::size_t k = g.size(); k-- > 0;) acc = acc * y0 + g[k];
      s.push_back(acc);
    }
    auto f = try_fraction(s, d);
    if (!f) continue;
    best_num = std::max(best_num, f->numerator.degree());
    best_den = std::max(best_den, f->denominator.degree());
    pts.push_back({y, std::move(*f)});
    const auto count = std::count_if(pts.begin(), pts.end(), good);
    if (static_cast<std::size_t>(count) >= d + 1) break;
  }
  std::vector<PointImage> chosen;
  for (auto& x : pts) {
    if (good(x) && chosen.size() < d + 1) chosen.push_back(std::move(x));
  }
  if (discarded) *discarded += pts.size() - chosen.size();
  if (chosen.size() < d + 1) return std::nullopt;

  PrimeImage img;
  img.prime = p;
  img.deg_num = best_num;
  img.deg_den = best_den;
  auto lift = [&](long deg, bool numerator) {
    std::vector<std::vector<std::uint64_t>> out;
    for (long i = 0; i <= deg; ++i) {
      std::vector<std::pair<Fp, Fp>> values;
      for (const auto& x : chosen) {
        const auto& poly = numerator ? x.f.numerator : x.f.denominator;
        values.emplace_back(Fp(x.y, p), poly.coeff(static_cast<std::size_t>(i)));
      }
      DensePoly<Fp> c = interpolate(values);
      std::vector<std::uint64_t> row(d + 1, 0);
      for (std::size_t k = 0; k < c.coeffs().size(); ++k) row[k] = c.coeffs()[k].value();
      out.push_back(std::move(row));
    }
    return out;
  };
  img.num = lift(best_num, true);
  img.den = lift(best_den, false);
  return img;
}

std::optional<BivariateFraction> combine(const std::vector<PrimeImage>& images, std::size_t d,
                                         unsigned order) {
  BivariateFraction f;
  f.order = order;
  auto build = [&](long deg, bool numerator,
                   std::vector<std::vector<BigRational>>& out) -> bool {
    out.assign(static_cast<std::size_t>(deg + 1), {});
    for (long i = 0; i <= deg; ++i) {
      auto& row = out[static_cast<std::size_t>(i)];
      row.assign(d + 1, BigRational(0));
      for (std::size_t k = 0; k <= d; ++k) {
        CrtAccumulator acc;
        for (const auto& img : images) {
          const auto& src = numerator ? img.num : img.den;
          acc.add(src[static_cast<std::size_t>(i)][k], img.prime);
        }
        auto q = try_rational_reconstruct(acc.value(), acc.modulus());
        if (!q) return false;
        row[k] = *q;
      }
      while (row.size() > 1 && row.back() == 0) row.pop_back();
    }
    return true;
  };
  const long deg_num = images.front().deg_num;
  const long deg_den = images.front().deg_den;
  if (!build(deg_num, true, f.numerator) || !build(deg_den, false, f.denominator)) {
    return std::nullopt;
  }
  return f;
}

bool same_fraction(const BivariateFraction& a, const BivariateFraction& b) {
  return a.numerator == b.numerator && a.denominator == b.denominator;
}

std::vector<BigRational> poly_mul(const std::vector<BigRational>& a, const std::vector<BigRational>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<BigRational> out(a.size() + b.size() - 1, BigRational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void trim(std::vector<BigRational>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

}  // namespace

std::size_t BivariateFraction::degree() const {
  return static_cast<std::size_t>(std::max<long>({numerator_degree(), denominator_degree(), 0}));
}

std::size_t BivariateFraction::y_degree() const {
  std::size_t out = 0;
  for (const auto* side : {&numerator, &denominator}) {
    for (auto row : *side) {
      trim(row);
      if (!row.empty()) out = std::max(out, row.size() - 1);
    }
  }
  return out;
}

ProbeResult probe_degree(const EmbeddedChain& chain, std::uint64_t seed) {
  const std::size_t size = chain.size();
  std::mt19937_64 rng(seed);
  std::optional<ChainView<Fp>> view;
  std::uint64_t p = 0;
  for (int attempt = 0; attempt < 64 && !view; ++attempt) {
    p = random_prime(61, rng);
    view = reduce_chain(chain, p);
  }
  if (!view) throw ReconstructionError("no usable probe prime");
  const Fp y0(1 + rng() % (p - 1), p);

  std::size_t d0 = 1;
  while (true) {
    d0 = std::min(d0, std::max<std::size_t>(size, 1));
    const std::size_t terms = 2 * (d0 + 1) + 1 + d0 + 8;
    const std::vector<Fp> s = series_at(*view, terms - 1, y0);
    auto f0 = try_fraction(s, d0);
    auto f1 = try_fraction(s, d0 + 1);
    if (f0 && f1 && f0->numerator == f1->numerator && f0->denominator == f1->denominator &&
        residual_ok(*f0, s)) {
      ProbeResult r;
      r.numerator_degree = f0->numerator.degree();
      r.denominator_degree = f0->denominator.degree();
      r.degree = static_cast<std::size_t>(std::max<long>({r.numerator_degree, r.denominator_degree, 0}));
      r.terms_used = terms;
      r.prime = p;
      return r;
    }
    if (d0 >= size) {
      throw ReconstructionError("degree probe exceeded the chain size " + std::to_string(size));
    }
    d0 *= 2;
  }
}

double series_memory_estimate(const EmbeddedChain& chain, std::size_t terms) {
  const double h = static_cast<double>(entry_height(chain));
  auto per = [h](double i) { return 32.0 + 2.0 * (i * h + 64.0) / 8.0; };
  double total = 0;
  for (std::size_t i = 0; i < terms; ++i) total += static_cast<double>(i + 1) * per(static_cast<double>(i));
  total += 2.0 * static_cast<double>(chain.size()) * static_cast<double>(terms) *
           per(static_cast<double>(terms));
  return total;
}

BivariateFraction reconstruct_gf(const EmbeddedChain& chain, std::size_t d,
                                 const ReconstructOptions& options, ReconstructStats* stats) {
  const std::size_t size = std::max<std::size_t>(chain.size(), 1);
  d = std::max<std::size_t>(1, std::min(d, size));
  const std::size_t h = entry_height(chain);
  PrimeStream primes(options.prime_bits);
  std::size_t discarded = 0;

  for (int round = 0; round < options.max_rounds;) {
    const std::size_t terms = 2 * d + 1 + options.extra_terms;
    const double bytes = series_memory_estimate(chain, terms);
    if (bytes > options.memory_budget_bytes) {
      std::ostringstream msg;
      msg << "exact series of " << terms << " terms needs about " << bytes / 1e9
          << " GB, above the budget of " << options.memory_budget_bytes / 1e9 << " GB";
      throw MemoryBudgetError(msg.str());
    }
    const auto series = series_prefix(chain, terms - 1);
    std::size_t series_bits = 1;
    for (const auto& g : series) {
      for (const auto& c : g) series_bits = std::max(series_bits, bit_size(c));
    }
    const double gamma = options.prime_bits;
    std::size_t want = static_cast<std::size_t>(
        std::ceil(std::max((2.0 * d + 2.0) * static_cast<double>(h), 2.0 * series_bits + 2.0) / gamma));
    want = std::max<std::size_t>(want, 1);

    std::vector<PrimeImage> images;
    std::optional<BivariateFraction> previous;
    bool raise_degree = false;
    for (; round < options.max_rounds; ++round) {
      // Repeated failures to find usable images (every Pade approximant
      // degenerate) also mean the degree bound is too small.
      for (int skipped = 0; images.size() < want && !raise_degree;) {
        auto img = image_mod(series, d, primes.next(), &discarded);
        if (img) {
          images.push_back(std::move(*img));
        } else if (++skipped > 8) {
          raise_degree = true;
        }
      }
      if (raise_degree) {
        ++round;
        break;
      }
      // Primes where every point degenerated to smaller degrees are unlucky.
      long deg_num = -1, deg_den = -1;
      for (const auto& img : images) {
        deg_num = std::max(deg_num, img.deg_num);
        deg_den = std::max(deg_den, img.deg_den);
      }
      std::vector<PrimeImage> kept;
      for (auto& img : images) {
        if (img.deg_num == deg_num && img.deg_den == deg_den) kept.push_back(std::move(img));
      }
      images = std::move(kept);
      if (images.size() < want) continue;

      auto f = combine(images, d, chain.order);
      if (f && verify_series(*f, series)) {
        if (stats) {
          stats->primes_used = images.size();
          stats->points_discarded = discarded;
          stats->series_terms = terms;
          stats->degree_bound = d;
        }
        return *f;
      }
      if (f && previous && same_fraction(*f, *previous)) {
        // Stable under more primes yet wrong: the degree bound is too small.
        raise_degree = true;
        ++round;
        break;
      }
      if (f) previous = std::move(f);
      want += want / 2 + 1;
    }
    if (!raise_degree) break;
    if (d >= size) break;
    d = std::min(size, d + std::max<std::size_t>(1, d / 4));
  }
  throw ReconstructionError("bivariate reconstruction did not verify within " +
                            std::to_string(options.max_rounds) + " rounds (degree bound " +
                            std::to_string(d) + ")");
}

BivariateFraction find_gf(const EmbeddedChain& chain, const ReconstructOptions& options,
                          ReconstructStats* stats) {
  const ProbeResult probe = probe_degree(chain, options.seed);
  return reconstruct_gf(chain, probe.degree, options, stats);
}

bool verify_series(const BivariateFraction& f, const std::vector<std::vector<BigRational>>& series) {
  if (f.denominator.empty() || f.denominator[0] != std::vector<BigRational>{1}) return false;
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::vector<BigRational> acc;
    for (std::size_t j = 0; j <= i && j < f.denominator.size(); ++j) {
      auto term = poly_mul(f.denominator[j], series[i - j]);
      if (term.size() > acc.size()) acc.resize(term.size(), BigRational(0));
      for (std::size_t k = 0; k < term.size(); ++k) acc[k] += term[k];
    }
    std::vector<BigRational> b = i < f.numerator.size() ? f.numerator[i] : std::vector<BigRational>{};
    trim(acc);
    trim(b);
    if (acc != b) return false;
  }
  return true;
}

bool verify(const BivariateFraction& f, const EmbeddedChain& chain, std::size_t extra) {
  const std::size_t terms = 2 * f.degree() + 1 + extra;
  return verify_series(f, series_prefix(chain, terms - 1));
}

void save_fraction(const BivariateFraction& f, const FractionKey& key, std::ostream& out) {
  out << "patdist-fraction 1\n";
  out << "alphabet " << key.alphabet << "\n";
  out << "pattern " << key.pattern << "\n";
  out << "model-hash " << std::hex << key.model_hash << std::dec << "\n";
  out << "order " << f.order << "\n";
  out << "degrees " << f.numerator_degree() << " " << f.denominator_degree() << "\n";
  for (auto [tag, side] : {std::pair{'B', &f.numerator}, std::pair{'A', &f.denominator}}) {
    for (std::size_t i = 0; i < side->size(); ++i) {
      for (std::size_t k = 0; k < (*side)[i].size(); ++k) {
        if ((*side)[i][k] == 0) continue;
        out << tag << " " << i << " " << k << " " << (*side)[i][k].get_str() << "\n";
      }
    }
  }
}

BivariateFraction load_fraction(std::istream& in, FractionKey* key) {
  std::string line;
  if (!std::getline(in, line) || line != "patdist-fraction 1") {
    throw InputError("fraction file: missing header 'patdist-fraction 1'");
  }
  BivariateFraction f;
  FractionKey k;
  long deg_num = -2, deg_den = -2;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    auto fail = [&](const std::string& why) {
      throw InputError("fraction file line " + std::to_string(lineno) + ": " + why);
    };
    if (tag == "alphabet") {
      ls >> k.alphabet;
    } else if (tag == "pattern") {
      std::getline(ls >> std::ws, k.pattern);
    } else if (tag == "model-hash") {
      ls >> std::hex >> k.model_hash >> std::dec;
    } else if (tag == "order") {
      ls >> f.order;
    } else if (tag == "degrees") {
      ls >> deg_num >> deg_den;
      if (!ls || deg_num < -1 || deg_den < 0) fail("bad degrees");
      f.numerator.assign(static_cast<std::size_t>(deg_num + 1), {});
      f.denominator.assign(static_cast<std::size_t>(deg_den + 1), {});
    } else if (tag == "A" || tag == "B") {
      if (deg_den < 0) fail("coefficient before 'degrees'");
      std::size_t i = 0, y = 0;
      std::string value;
      ls >> i >> y >> value;
      if (!ls) fail("expected '<tag> <z-index> <y-index> <rational>'");
      auto& side = tag == "A" ? f.denominator : f.numerator;
      if (i >= side.size()) fail("z-index above the declared degree");
      BigRational q;
      if (q.set_str(value, 10) != 0) fail("bad rational '" + value + "'");
      q.canonicalize();
      if (side[i].size() <= y) side[i].resize(y + 1, BigRational(0));
      side[i][y] = q;
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (deg_den < 0) throw InputError("fraction file: missing 'degrees'");
  if (f.denominator[0] != std::vector<BigRational>{1}) {
    throw InputError("fraction file: denominator must have constant term 1");
  }
  if (key) *key = k;
  return f;
}

}  // namespace patdist
