#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "patdist/ext_float.hpp"
#include "patdist/markov.hpp"
#include "patdist/recursion.hpp"

namespace patdist {

enum class Method { kAuto, kFull, kPartial, kLifting, kFiduccia };

Method parse_method(const std::string& name);  // throws InputError
std::string to_string(Method m);

struct ChainStats {
  std::size_t states = 0;  // embedded chain size
  std::size_t length = 0;
  std::size_t nmax = 0;
  bool fraction_available = false;
};

// Auto-mode rule table:
//   persisted fraction available            -> lifting
//   length * (nmax + 1) <= kTinyWork        -> full recursion
//   states <= kSmallChain (so d <= states)  -> lifting
//   otherwise                               -> partial recursion
inline constexpr std::size_t kTinyWork = 20000;
inline constexpr std::size_t kSmallChain = 64;
Method select_method(const ChainStats& stats);

enum class ModelSource { kUniform, kFit, kFile };

struct JobSpec {
  std::string pattern;
  std::string alphabet;  // may be empty with a model file
  std::string classes;
  ModelSource source = ModelSource::kUniform;
  std::string model_path;  // FASTA for kFit, model file for kFile
  unsigned order = 0;      // kFit only
  std::string initial = "first";  // kFit: first | stationary | <context word>
  bool skip_foreign = false;
  std::size_t length = 0;
  std::size_t n_min = 0, n_max = 0;
  Method method = Method::kAuto;
  mpfr_prec_t precision = ExtFloat::kDefaultPrecision;
  double eta = 1e-15;
  bool exact = false;
  std::string fraction_cache;
  std::uint64_t seed = 1;
};

struct PhaseTiming {
  std::string name;
  double seconds = 0;
};

struct Report {
  std::size_t automaton_states = 0;  // R of the order-m automaton
  std::size_t final_states = 0;
  std::size_t chain_states = 0;      // positive-probability states
  unsigned order = 0;
  Method method = Method::kAuto;     // engine actually used
  CountDistribution distribution;
  std::vector<PhaseTiming> timings;
  std::map<std::string, std::string> metadata;
};

// Model for a job (alphabet taken from the model file when spec.alphabet is
// empty).
MarkovModel job_model(const JobSpec& spec);

// Automaton, model, embedding, engine; timings per phase.
Report run_job(const JobSpec& spec);

}  // namespace patdist
