#include "patdist/job.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "patdist/automaton.hpp"
#include "patdist/embedding.hpp"
#include "patdist/error.hpp"
#include "patdist/gf.hpp"
#include "patdist/lifting.hpp"

namespace patdist {

namespace {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return static_cast<bool>(in);
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "auto") return Method::kAuto;
  if (name == "full") return Method::kFull;
  if (name == "partial") return Method::kPartial;
  if (name == "lifting") return Method::kLifting;
  if (name == "fiduccia") return Method::kFiduccia;
  throw InputError("unknown method '" + name + "' (auto, full, partial, lifting, fiduccia)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kAuto: return "auto";
    case Method::kFull: return "full";
    case Method::kPartial: return "partial";
    case Method::kLifting: return "lifting";
    case Method::kFiduccia: return "fiduccia";
  }
  return "?";
}

Method select_method(const ChainStats& stats) {
  if (stats.fraction_available) return Method::kLifting;
  if (stats.length * (stats.nmax + 1) <= kTinyWork) return Method::kFull;
  if (stats.states <= kSmallChain) return Method::kLifting;
  return Method::kPartial;
}

MarkovModel job_model(const JobSpec& spec) {
  switch (spec.source) {
    case ModelSource::kUniform:
      if (spec.alphabet.empty()) throw InputError("--uniform needs --alphabet");
      return uniform_iid(Alphabet(spec.alphabet));
    case ModelSource::kFile: {
      MarkovModel m = load_model_file(spec.model_path);
      if (!spec.alphabet.empty() && !(Alphabet(spec.alphabet) == m.alphabet)) {
        throw InputError("--alphabet differs from the alphabet of model file " + spec.model_path);
      }
      return m;
    }
    case ModelSource::kFit: {
      if (spec.alphabet.empty()) throw InputError("--fit needs --alphabet");
      const Alphabet a(spec.alphabet);
      MarkovModel m = fit_mle(read_fasta_file(spec.model_path, a, spec.skip_foreign), a, spec.order);
      if (spec.order > 0) {
        if (spec.initial == "stationary") {
          set_initial_stationary(m);
        } else if (spec.initial != "first") {
          set_initial_point_mass(m, spec.initial);
        }
      }
      return m;
    }
  }
  throw InternalError("unknown model source");
}

Report run_job(const JobSpec& spec) {
  if (spec.n_min > spec.n_max) throw InputError("--n-min exceeds --n-max");
  Report report;
  Stopwatch clock;

  MarkovModel model = job_model(spec);
  validate(model);
  const Alphabet& alphabet = model.alphabet;
  report.order = model.order;
  report.timings.push_back({"model", clock.lap()});

  const PatternAst ast = parse_pattern(spec.pattern, alphabet, parse_class_table(spec.classes));
  const OrderMDfa automaton = make_order_m(build_min_dfa(ast), model.order);
  report.automaton_states = automaton.chain_size();
  for (std::size_t q = 0; q < automaton.dfa.size(); ++q) {
    if (!automaton.is_transient(q) && automaton.dfa.is_final(q)) ++report.final_states;
  }
  report.timings.push_back({"automaton", clock.lap()});

  const EmbeddedChain chain = embed(automaton, model);
  report.chain_states = chain.size();
  report.timings.push_back({"embedding", clock.lap()});
  if (spec.length < model.order) {
    throw InputError("sequence length " + std::to_string(spec.length) + " is below the model order " +
                     std::to_string(model.order));
  }

  const FractionKey key{alphabet.letters(), spec.pattern, model_hash(model)};
  const bool cached = !spec.fraction_cache.empty() && file_exists(spec.fraction_cache);
  Method method = spec.method;
  if (method == Method::kAuto) {
    method = select_method({chain.size(), spec.length, spec.n_max, cached});
    report.metadata["auto_selected"] = to_string(method);
  }

  const std::size_t n = spec.n_max;
  auto run_full = [&] {
    report.distribution = full_distribution(chain, spec.length, n, spec.exact, spec.precision);
    report.timings.push_back({"t0_full", clock.lap()});
  };

  switch (method) {
    case Method::kFull:
      run_full();
      break;
    case Method::kPartial: {
      PartialOptions opts;
      opts.precision = spec.precision;
      opts.eta = spec.eta;
      try {
        ChainView<ExtFloat> f = to_float(chain, spec.precision);
        ExtFloat eps = ExtFloat::from_long(1, spec.precision);
        mpfr_mul_2si(eps.get(), eps.get(), opts.eps_log2, MPFR_RNDN);
        opts.spectral = dominant_eigenvalue(f.P, eps);
        report.timings.push_back({"t1_lambda", clock.lap()});
        report.distribution = partial_distribution(chain, spec.length, n, opts);
        report.timings.push_back({"t3_partial", clock.lap()});
      } catch (const SpectralError& e) {
        if (spec.method != Method::kAuto) throw;
        report.metadata["auto_fallback"] = std::string("full recursion (") + e.what() + ")";
        method = Method::kFull;
        run_full();
      }
      break;
    }
    case Method::kLifting:
    case Method::kFiduccia: {
      BivariateFraction fraction;
      if (cached) {
        std::ifstream in(spec.fraction_cache);
        FractionKey stored;
        fraction = load_fraction(in, &stored);
        if (stored.alphabet != key.alphabet || stored.pattern != key.pattern ||
            stored.model_hash != key.model_hash || fraction.order != model.order) {
          throw InputError("fraction cache " + spec.fraction_cache +
                           " was built for a different pattern or model; remove it or pick another path");
        }
        report.metadata["fraction_source"] = "cache";
      } else {
        ReconstructOptions ropts;
        ropts.seed = spec.seed;
        ReconstructStats stats;
        fraction = find_gf(chain, ropts, &stats);
        report.metadata["fraction_primes"] = std::to_string(stats.primes_used);
        report.metadata["fraction_source"] = "reconstructed";
        if (!spec.fraction_cache.empty()) {
          std::ofstream out(spec.fraction_cache);
          if (!out) throw InputError("cannot write fraction cache " + spec.fraction_cache);
          save_fraction(fraction, key, out);
        }
      }
      report.timings.push_back({"t2_fraction", clock.lap()});
      LiftOptions lopts;
      lopts.exact = spec.exact;
      lopts.precision = spec.precision;
      lopts.method = method == Method::kFiduccia ? LiftMethod::kFiduccia : LiftMethod::kHighOrder;
      report.distribution = bivariate_lift(fraction, spec.length, n, lopts);
      report.timings.push_back({"t4_lifting", clock.lap()});
      break;
    }
    case Method::kAuto:
      throw InternalError("method left unresolved");
  }
  report.method = method;
  return report;
}

}  // namespace patdist
