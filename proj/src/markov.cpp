#include "patdist/markov.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "patdist/error.hpp"
#include "patdist/ext_float.hpp"

namespace patdist {

namespace {

std::string context_label(const MarkovModel& m, std::size_t c) {
  return m.order == 0 ? std::string("-") : m.alphabet.context_word(c, m.order);
}

MarkovModel empty_model(const Alphabet& alphabet, unsigned order) {
  MarkovModel m;
  m.alphabet = alphabet;
  m.order = order;
  const std::size_t contexts = alphabet.context_count(order);
  m.transition.assign(contexts * alphabet.size(), BigRational(0));
  m.defined.assign(contexts, 0);
  if (order > 0) m.initial.assign(contexts, BigRational(0));
  return m;
}

}  // namespace

void validate(const MarkovModel& model) {
  const std::size_t k = model.alphabet.size();
  if (model.transition.size() != model.context_count() * k) {
    throw InputError("model transition table has the wrong size");
  }
  for (std::size_t c = 0; c < model.context_count(); ++c) {
    BigRational sum = 0;
    for (std::size_t b = 0; b < k; ++b) {
      const BigRational& p = model.prob(c, b);
      if (p < 0 || p > 1) {
        throw InputError("transition probability out of range in context " +
                         context_label(model, c));
      }
      if (!model.defined[c] && p != 0) {
        throw InputError("undefined context " + context_label(model, c) + " has probabilities");
      }
      sum += p;
    }
    if (model.defined[c] && sum != 1) {
      throw InputError("transition row for context " + context_label(model, c) + " sums to " +
                       to_string(sum) + ", not 1");
    }
  }
  if (model.order > 0) {
    if (model.initial.size() != model.context_count()) {
      throw InputError("initial distribution has the wrong size");
    }
    BigRational sum = 0;
    for (const auto& p : model.initial) {
      if (p < 0 || p > 1) throw InputError("initial probability out of range");
      sum += p;
    }
    if (sum != 1) throw InputError("initial distribution sums to " + to_string(sum) + ", not 1");
  } else if (!model.initial.empty()) {
    throw InputError("order 0 models take no initial distribution");
  }
}

MarkovModel uniform_iid(const Alphabet& alphabet) {
  MarkovModel m = empty_model(alphabet, 0);
  const BigRational p(1, static_cast<unsigned long>(alphabet.size()));
  for (auto& t : m.transition) t = p;
  m.defined[0] = 1;
  return m;
}

std::vector<std::uint64_t> transition_counts(const Alphabet& alphabet, unsigned order,
                                             const std::vector<std::string>& sequences) {
  const std::size_t k = alphabet.size();
  const std::size_t contexts = alphabet.context_count(order);
  std::vector<std::uint64_t> counts(contexts * k, 0);
  for (const auto& s : sequences) {
    std::size_t ctx = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::size_t a = alphabet.index(s[i]);
      if (i >= order) ++counts[ctx * k + a];
      ctx = contexts == 1 ? 0 : (ctx * k + a) % contexts;
    }
  }
  return counts;
}

MarkovModel fit_from_counts(const Alphabet& alphabet, unsigned order,
                            const std::vector<std::uint64_t>& counts) {
  MarkovModel m = empty_model(alphabet, order);
  const std::size_t k = alphabet.size();
  if (counts.size() != m.transition.size()) throw InputError("count table has the wrong size");
  for (std::size_t c = 0; c < m.context_count(); ++c) {
    BigInt total = 0;
    for (std::size_t b = 0; b < k; ++b) total += BigInt(static_cast<unsigned long>(counts[c * k + b]));
    if (total == 0) continue;
    m.defined[c] = 1;
    for (std::size_t b = 0; b < k; ++b) {
      BigRational p(BigInt(static_cast<unsigned long>(counts[c * k + b])), total);
      p.canonicalize();
      m.transition[c * k + b] = p;
    }
  }
  return m;
}

MarkovModel fit_mle(const std::vector<std::string>& sequences, const Alphabet& alphabet,
                    unsigned order) {
  MarkovModel m = fit_from_counts(alphabet, order, transition_counts(alphabet, order, sequences));
  if (std::none_of(m.defined.begin(), m.defined.end(), [](char d) { return d != 0; })) {
    throw InputError("training data shorter than order + 1");
  }
  if (order > 0) {
    for (const auto& s : sequences) {
      if (s.size() >= order) {
        set_initial_point_mass(m, std::string_view(s).substr(0, order));
        break;
      }
    }
  }
  return m;
}

MarkovModel fit_mle(std::string_view sequence, const Alphabet& alphabet, unsigned order) {
  return fit_mle(std::vector<std::string>{std::string(sequence)}, alphabet, order);
}

void set_initial_point_mass(MarkovModel& model, std::string_view context) {
  if (context.size() != model.order) {
    throw InputError("initial context must have exactly " + std::to_string(model.order) +
                     " letters");
  }
  if (model.order == 0) return;
  model.initial.assign(model.context_count(), BigRational(0));
  model.initial[model.alphabet.context_index(context)] = 1;
  model.initial_approximate = false;
}

void set_initial_stationary(MarkovModel& model, long precision_bits) {
  if (model.order == 0) return;
  const std::size_t k = model.alphabet.size();
  const std::size_t n = model.context_count();
  const auto prec = static_cast<mpfr_prec_t>(precision_bits);
  std::vector<ExtFloat> prob;
  prob.reserve(model.transition.size());
  for (const auto& p : model.transition) prob.emplace_back(p, prec);

  // Lazy chain (I + T)/2 has the same stationary vector and is aperiodic.
  std::size_t defined_count = 0;
  for (auto d : model.defined) defined_count += d ? 1 : 0;
  if (defined_count == 0) throw InputError("model has no defined context");
  std::vector<ExtFloat> x(n, ExtFloat(prec)), y(n, ExtFloat(prec));
  const ExtFloat share = ExtFloat::from_long(1, prec) /
                         ExtFloat::from_long(static_cast<long>(defined_count), prec);
  for (std::size_t c = 0; c < n; ++c) {
    if (model.defined[c]) x[c] = share;
  }
  ExtFloat tol = ExtFloat::from_long(1, prec);
  for (long i = 0; i < precision_bits / 2; ++i) tol /= 2UL;
  const ExtFloat half = ExtFloat::from_double(0.5, prec);
  constexpr int kMaxIterations = 1000000;
  for (int it = 0;; ++it) {
    if (it == kMaxIterations) throw ConvergenceError("stationary distribution did not converge");
    for (auto& v : y) v.set_zero();
    for (std::size_t c = 0; c < n; ++c) {
      if (x[c].is_zero()) continue;
      if (!model.defined[c]) {
        throw InputError("stationary walk reaches undefined context " +
                         model.alphabet.context_word(c, model.order));
      }
      ExtFloat hx = x[c] * half;
      y[c] += hx;
      for (std::size_t b = 0; b < k; ++b) {
        y[(c * k + b) % n].add_mul(hx, prob[c * k + b]);
      }
    }
    ExtFloat change(prec);
    for (std::size_t c = 0; c < n; ++c) change += abs(y[c] - x[c]);
    std::swap(x, y);
    if (change < tol) break;
  }
  model.initial.assign(n, BigRational(0));
  BigRational sum = 0;
  std::size_t last = n;
  for (std::size_t c = 0; c < n; ++c) {
    if (x[c].is_zero()) continue;
    mpfr_get_q(model.initial[c].get_mpq_t(), x[c].get());
    sum += model.initial[c];
    last = c;
  }
  // Absorb the rounding residue so the vector sums to exactly 1.
  model.initial[last] += 1 - sum;
  model.initial_approximate = true;
}

void save_model(const MarkovModel& model, std::ostream& out) {
  out << "patdist-model 1\n";
  out << "alphabet " << model.alphabet.letters() << "\n";
  out << "order " << model.order << "\n";
  if (model.initial_approximate) out << "initial-approximate\n";
  for (std::size_t c = 0; c < model.initial.size(); ++c) {
    if (model.initial[c] != 0) out << "init " << context_label(model, c) << " " << to_string(model.initial[c]) << "\n";
  }
  const std::size_t k = model.alphabet.size();
  for (std::size_t c = 0; c < model.context_count(); ++c) {
    if (!model.defined[c]) continue;
    for (std::size_t b = 0; b < k; ++b) {
      out << "trans " << context_label(model, c) << " " << model.alphabet.letter(b) << " "
          << to_string(model.prob(c, b)) << "\n";
    }
  }
}

MarkovModel load_model(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw InputError("model file line " + std::to_string(lineno) + ": " + what);
  };
  MarkovModel m;
  bool have_alphabet = false, have_order = false, approximate = false;
  std::vector<std::string> body;
  std::vector<std::size_t> body_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    if (key == "patdist-model") {
      std::string version;
      ls >> version;
      if (version != "1") fail("unsupported model format version '" + version + "'");
    } else if (key == "alphabet") {
      std::string letters;
      if (!(ls >> letters)) fail("missing alphabet letters");
      m.alphabet = Alphabet(letters);
      have_alphabet = true;
    } else if (key == "order") {
      long order = -1;
      if (!(ls >> order) || order < 0 || order > 32) fail("bad order");
      m.order = static_cast<unsigned>(order);
      have_order = true;
    } else if (key == "initial-approximate") {
      approximate = true;
    } else if (key == "init" || key == "trans") {
      body.push_back(line);
      body_lines.push_back(lineno);
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (!have_alphabet || !have_order) throw InputError("model file lacks alphabet or order");
  MarkovModel out = empty_model(m.alphabet, m.order);
  out.initial_approximate = approximate;
  const std::size_t k = out.alphabet.size();
  auto parse_context = [&](const std::string& word) -> std::size_t {
    if (out.order == 0) {
      if (word != "-") fail("order 0 context must be '-'");
      return 0;
    }
    if (word.size() != out.order) fail("context '" + word + "' has the wrong length");
    return out.alphabet.context_index(word);
  };
  for (std::size_t i = 0; i < body.size(); ++i) {
    lineno = body_lines[i];
    std::istringstream ls(body[i]);
    std::string key, ctx, a, b;
    ls >> key >> ctx >> a;
    try {
      if (key == "init") {
        if (out.order == 0) fail("order 0 models take no init lines");
        out.initial[parse_context(ctx)] = parse_rational(a);
      } else {
        if (!(ls >> b) || a.size() != 1) fail("expected 'trans <context> <letter> <probability>'");
        const std::size_t c = parse_context(ctx);
        out.defined[c] = 1;
        out.transition[c * k + out.alphabet.index(a[0])] = parse_rational(b);
      }
    } catch (const InputError& e) {
      if (std::string(e.what()).rfind("model file line", 0) == 0) throw;
      fail(e.what());
    }
  }
  validate(out);
  return out;
}

void save_model_file(const MarkovModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file " + path);
  save_model(model, out);
}

MarkovModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model file " + path);
  return load_model(in);
}

std::uint64_t model_hash(const MarkovModel& model) {
  std::ostringstream os;
  save_model(model, os);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : os.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> read_fasta(std::istream& in, const Alphabet& alphabet,
                                    bool skip_foreign) {
  std::vector<std::string> records;
  std::string line;
  bool open = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '>') {
      records.emplace_back();
      open = true;
      continue;
    }
    if (!open) {
      records.emplace_back();
      open = true;
    }
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      if (alphabet.contains(u)) {
        records.back().push_back(u);
      } else if (!skip_foreign) {
        throw InputError("sequence line " + std::to_string(lineno) + ": character '" +
                         std::string(1, c) + "' is not in alphabet " + alphabet.letters());
      }
    }
  }
  return records;
}

std::vector<std::string> read_fasta_file(const std::string& path, const Alphabet& alphabet,
                                         bool skip_foreign) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read sequence file " + path);
  return read_fasta(in, alphabet, skip_foreign);
}

}  // namespace patdist
