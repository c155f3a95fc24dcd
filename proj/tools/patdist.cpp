#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "patdist/automaton.hpp"
#include "patdist/embedding.hpp"
#include "patdist/error.hpp"
#include "patdist/job.hpp"
#include "patdist/markov.hpp"
#include "patdist/oracle.hpp"

using namespace patdist;

namespace {

struct ModelFlags {
  std::string fit, model;
  bool uniform = false;
  unsigned order = 0;
  std::string initial = "first";
  bool skip_foreign = false;

  void add(CLI::App* app) {
    auto* f = app->add_option("--fit", fit, "FASTA file to fit an order-m model on (with --order)");
    auto* m = app->add_option("--model", model, "model file written by 'patdist fit'");
    auto* u = app->add_flag("--uniform", uniform, "uniform iid letters over --alphabet");
    f->excludes(m)->excludes(u);
    m->excludes(u);
    app->add_option("--order", order, "Markov order for --fit");
    app->add_option("--initial", initial,
                    "initial context for --fit: first (observed), stationary, or a context word");
    app->add_flag("--skip-foreign", skip_foreign, "skip letters outside the alphabet in FASTA input");
  }

  void apply(JobSpec& spec) const {
    const int sources = !fit.empty() + !model.empty() + uniform;
    if (sources != 1) throw InputError("choose exactly one model source: --fit, --model or --uniform");
    if (!fit.empty()) {
      spec.source = ModelSource::kFit;
      spec.model_path = fit;
    } else if (!model.empty()) {
      spec.source = ModelSource::kFile;
      spec.model_path = model;
    } else {
      spec.source = ModelSource::kUniform;
    }
    spec.order = order;
    spec.initial = initial;
    spec.skip_foreign = skip_foreign;
  }
};

std::string format_value(const ExtFloat& v, int digits) { return v.to_string(digits); }

void print_report(const JobSpec& spec, const Report& r, const std::string& format, int digits) {
  const auto& dist = r.distribution;
  std::vector<std::pair<std::string, std::string>> info = {
      {"pattern", spec.pattern},
      {"order", std::to_string(r.order)},
      {"length", std::to_string(spec.length)},
      {"R", std::to_string(r.automaton_states)},
      {"F", std::to_string(r.final_states)},
      {"chain_states", std::to_string(r.chain_states)},
      {"method", dist.method},
  };
  for (const auto& [k, v] : r.metadata) info.emplace_back(k, v);
  for (const auto& [k, v] : dist.metadata) info.emplace_back(k, v);
  auto seconds = [](double s) {
    std::ostringstream o;
    o.precision(4);
    o << std::fixed << s;
    return o.str();
  };

  if (format == "kv") {
    for (const auto& [k, v] : info) std::cout << k << "=" << v << "\n";
    for (const auto& t : r.timings) std::cout << "time." << t.name << "=" << seconds(t.seconds) << "\n";
    for (std::size_t k = spec.n_min; k <= spec.n_max; ++k) {
      std::cout << "p." << k << "=" << format_value(dist.values[k], digits) << "\n";
      if (dist.exact) std::cout << "exact." << k << "=" << to_string((*dist.exact)[k]) << "\n";
    }
    return;
  }
  if (format == "csv") {
    std::cout << "n,probability" << (dist.exact ? ",exact" : "") << "\n";
    for (std::size_t k = spec.n_min; k <= spec.n_max; ++k) {
      std::cout << k << "," << format_value(dist.values[k], digits);
      if (dist.exact) std::cout << "," << to_string((*dist.exact)[k]);
      std::cout << "\n";
    }
    return;
  }
  for (const auto& [k, v] : info) std::cout << "# " << k << ": " << v << "\n";
  std::cout << "# time (s):";
  for (const auto& t : r.timings) std::cout << " " << t.name << "=" << seconds(t.seconds);
  std::cout << "\n";
  std::cout << "n\tP(N=n)" << (dist.exact ? "\texact" : "") << "\n";
  for (std::size_t k = spec.n_min; k <= spec.n_max; ++k) {
    std::cout << k << "\t" << format_value(dist.values[k], digits);
    if (dist.exact) std::cout << "\t" << to_string((*dist.exact)[k]);
    std::cout << "\n";
  }
}

int exit_code(ErrorKind k) { return static_cast<int>(k); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patdist: exact distribution of pattern occurrence counts in Markov sequences"};
  app.require_subcommand(1);

  // run
  JobSpec spec;
  ModelFlags run_model;
  std::string method = "auto", format = "table";
  long n_single = -1, n_lo = -1, n_hi = -1;
  int digits = 6;
  bool full_precision = false;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "compute P(N_length = n)");
  run->add_option("--pattern", spec.pattern, "regular expression")->required();
  run->add_option("--alphabet", spec.alphabet, "alphabet letters, e.g. ACGT");
  run->add_option("--classes", spec.classes, "named classes, e.g. N=ACGT,R=[AG]");
  run_model.add(run);
  run->add_option("--length", spec.length, "sequence length")->required();
  run->add_option("--n", n_single, "single count n (reports n only)");
  run->add_option("--n-min", n_lo, "smallest reported count");
  run->add_option("--n-max", n_hi, "largest reported count");
  run->add_option("--method", method, "auto | full | partial | lifting | fiduccia");
  run->add_option("--precision-bits", spec.precision, "mantissa bits of extended floats");
  run->add_option("--eta", spec.eta, "partial recursion convergence threshold");
  run->add_flag("--exact", spec.exact, "exact rationals (full recursion and lifting)");
  run->add_option("--fraction-cache", spec.fraction_cache, "read/write the bivariate fraction here");
  run->add_option("--format", format, "table | csv | kv")->check(CLI::IsMember({"table", "csv", "kv"}));
  run->add_option("--digits", digits, "significant digits printed");
  run->add_flag("--full-precision", full_precision, "print every significant digit of the precision");
  run->add_option("--seed", spec.seed, "seed for the randomized reconstruction");
  run->add_option("--jobs", jobs, "worker threads (reserved; engines are sequential)");

  // automaton
  std::string a_pattern, a_alphabet, a_classes, a_dot, a_scan;
  unsigned a_order = 0;
  auto* aut = app.add_subcommand("automaton", "build the minimal order-m automaton");
  aut->add_option("--pattern", a_pattern, "regular expression")->required();
  aut->add_option("--alphabet", a_alphabet, "alphabet letters")->required();
  aut->add_option("--classes", a_classes, "named classes");
  aut->add_option("--order", a_order, "order m");
  aut->add_option("--dot", a_dot, "write Graphviz DOT here");
  aut->add_option("--scan", a_scan, "print end positions of occurrences in this text");

  // fit
  std::string f_fasta, f_alphabet, f_out, f_initial = "first";
  unsigned f_order = 0;
  bool f_skip = false;
  auto* fit = app.add_subcommand("fit", "fit a Markov model to a FASTA file");
  fit->add_option("--fasta", f_fasta, "input FASTA")->required();
  fit->add_option("--alphabet", f_alphabet, "alphabet letters")->required();
  fit->add_option("--order", f_order, "order m");
  fit->add_option("--out", f_out, "model file (default: stdout)");
  fit->add_option("--initial", f_initial, "first | stationary | context word");
  fit->add_flag("--skip-foreign", f_skip, "skip letters outside the alphabet");

  // oracle
  JobSpec o_spec;
  ModelFlags o_model;
  std::string o_mode = "exhaustive";
  std::uint64_t o_samples = 100000, o_budget = 10000000;
  unsigned o_jobs = 1;
  long o_nmax = -1;
  auto* orc = app.add_subcommand("oracle", "exhaustive enumeration or Monte Carlo estimate");
  orc->add_option("--pattern", o_spec.pattern, "regular expression")->required();
  orc->add_option("--alphabet", o_spec.alphabet, "alphabet letters");
  orc->add_option("--classes", o_spec.classes, "named classes");
  o_model.add(orc);
  orc->add_option("--length", o_spec.length, "sequence length")->required();
  orc->add_option("--n-max", o_nmax, "largest reported count (default: all)");
  orc->add_option("--mode", o_mode, "exhaustive | monte-carlo")
      ->check(CLI::IsMember({"exhaustive", "monte-carlo"}));
  orc->add_option("--samples", o_samples, "Monte Carlo sample count");
  orc->add_option("--budget", o_budget, "largest number of enumerated sequences");
  orc->add_option("--seed", o_spec.seed, "Monte Carlo seed");
  orc->add_option("--jobs", o_jobs, "Monte Carlo worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::kInput);
  }

  try {
    if (*run) {
      run_model.apply(spec);
      spec.method = parse_method(method);
      if (n_single >= 0) {
        if (n_lo >= 0 || n_hi >= 0) throw InputError("--n excludes --n-min/--n-max");
        spec.n_min = spec.n_max = static_cast<std::size_t>(n_single);
      } else {
        if (n_hi < 0) throw InputError("give --n or --n-max");
        spec.n_max = static_cast<std::size_t>(n_hi);
        spec.n_min = n_lo < 0 ? 0 : static_cast<std::size_t>(n_lo);
      }
      if (spec.precision < 64) throw InputError("--precision-bits must be at least 64");
      const Report r = run_job(spec);
      if (full_precision) digits = static_cast<int>(std::floor(spec.precision * std::log10(2.0)));
      print_report(spec, r, format, digits);
    } else if (*aut) {
      const Alphabet a(a_alphabet);
      const OrderMDfa om =
          make_order_m(build_min_dfa(parse_pattern(a_pattern, a, parse_class_table(a_classes))), a_order);
      std::size_t finals = 0, transient = 0;
      for (std::size_t q = 0; q < om.dfa.size(); ++q) {
        if (om.is_transient(q)) {
          ++transient;
        } else if (om.dfa.is_final(q)) {
          ++finals;
        }
      }
      std::cout << "R=" << om.chain_size() << "\nF=" << finals << "\ntransient=" << transient << "\n";
      if (!a_dot.empty()) {
        std::ofstream out(a_dot);
        if (!out) throw InputError("cannot write " + a_dot);
        out << to_dot(om.dfa, "patdist");
      }
      if (!a_scan.empty()) {
        std::cout << "occurrences=";
        const auto ends = scan(om.dfa, a_scan);
        for (std::size_t i = 0; i < ends.size(); ++i) std::cout << (i ? "," : "") << ends[i];
        std::cout << "\n";
      }
    } else if (*fit) {
      const Alphabet a(f_alphabet);
      MarkovModel m = fit_mle(read_fasta_file(f_fasta, a, f_skip), a, f_order);
      if (f_order > 0 && f_initial == "stationary") {
        set_initial_stationary(m);
      } else if (f_order > 0 && f_initial != "first") {
        set_initial_point_mass(m, f_initial);
      }
      if (f_out.empty()) {
        save_model(m, std::cout);
      } else {
        save_model_file(m, f_out);
      }
    } else if (*orc) {
      o_model.apply(o_spec);
      const MarkovModel m = job_model(o_spec);
      const OrderMDfa om = make_order_m(
          build_min_dfa(parse_pattern(o_spec.pattern, m.alphabet, parse_class_table(o_spec.classes))),
          m.order);
      const std::size_t top =
          o_nmax < 0 ? o_spec.length : std::min<std::size_t>(o_spec.length, static_cast<std::size_t>(o_nmax));
      if (o_mode == "exhaustive") {
        const OracleResult r = exhaustive(om, m, o_spec.length, o_budget);
        std::cout << "n\tP(N=n)\texact\n";
        for (std::size_t k = 0; k <= top && k < r.exact.size(); ++k) {
          std::cout << k << "\t" << ExtFloat(r.exact[k], 64).to_string(6) << "\t" << to_string(r.exact[k])
                    << "\n";
        }
      } else {
        const OracleResult r = monte_carlo(om, m, o_spec.length, o_samples, o_spec.seed, o_jobs);
        std::cout << "# samples: " << r.samples << "\n";
        std::cout << "n\testimate\tstandard_error\n";
        for (std::size_t k = 0; k <= top && k < r.estimate.size(); ++k) {
          std::cout << k << "\t" << r.estimate[k] << "\t" << r.standard_error[k] << "\n";
        }
      }
    }
  } catch (const Error& e) {
    std::cerr << "patdist: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "patdist: internal error: " << e.what() << "\n";
    return exit_code(ErrorKind::kInternal);
  }
  return 0;
}
