// Copyright 2026 The gramhmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gramhmm/gramhmm.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "gramhmm/approx.hpp"
#include "gramhmm/error.hpp"
#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"
#include "gramhmm/inference.hpp"
#include "gramhmm/oracle.hpp"
#include "gramhmm/reductions.hpp"
#include "gramhmm/sampling.hpp"

struct gramhmm_grammar {
  gramhmm::CnfGrammar value;
};

struct gramhmm_hmm {
  gramhmm::Hmm value;
};

struct gramhmm_samples {
  std::vector<std::string> strings;
  std::vector<std::string> trees;
  std::vector<double> weights;
};

struct gramhmm_distribution {
  std::vector<std::string> strings;
  std::vector<double> probabilities;
  double z_weighted;
  double likelihood;
};

struct gramhmm_formula {
  gramhmm::Cnf3Formula value;
};

namespace {

thread_local std::string g_last_error;

gramhmm_status ToStatus(gramhmm::ErrorKind kind) {
  using gramhmm::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument: return GRAMHMM_ERR_INVALID_ARGUMENT;
    case ErrorKind::kParse: return GRAMHMM_ERR_PARSE;
    case ErrorKind::kValidation: return GRAMHMM_ERR_VALIDATION;
    case ErrorKind::kNumerical: return GRAMHMM_ERR_NUMERICAL;
    case ErrorKind::kGuard: return GRAMHMM_ERR_GUARD;
    case ErrorKind::kIo: return GRAMHMM_ERR_IO;
  }
  return GRAMHMM_ERR_INTERNAL;
}

template <typename Fn>
gramhmm_status Guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GRAMHMM_OK;
  } catch (const gramhmm::Error& e) {
    g_last_error = e.what();
    return ToStatus(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GRAMHMM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GRAMHMM_ERR_INTERNAL;
  }
}

void Require(bool condition, const char* what) {
  if (!condition) gramhmm::Fail(gramhmm::ErrorKind::kInvalidArgument, what);
}

std::string ReadFile(const char* path) {
  Require(path != nullptr, "null path");
  std::ifstream in(path, std::ios::binary);
  if (!in) gramhmm::Fail(gramhmm::ErrorKind::kIo, std::string("cannot open '") + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gramhmm_version(void) { return "1.0.0"; }

const char* gramhmm_last_error(void) { return g_last_error.c_str(); }

void gramhmm_string_free(char* text) { std::free(text); }

gramhmm_status gramhmm_grammar_parse(const char* text, gramhmm_grammar** out) {
  return Guarded([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_grammar{gramhmm::parse_grammar(text)};
  });
}

gramhmm_status gramhmm_grammar_load(const char* path, gramhmm_grammar** out) {
  return Guarded([&] {
    Require(out != nullptr, "null argument");
    *out = new gramhmm_grammar{gramhmm::parse_grammar(ReadFile(path))};
  });
}

void gramhmm_grammar_free(gramhmm_grammar* grammar) { delete grammar; }

gramhmm_status gramhmm_grammar_format(const gramhmm_grammar* grammar, char** out_text) {
  return Guarded([&] {
    Require(grammar != nullptr && out_text != nullptr, "null argument");
    *out_text = CopyString(gramhmm::format_grammar(grammar->value));
  });
}

size_t gramhmm_grammar_nonterminal_count(const gramhmm_grammar* grammar) {
  return grammar ? grammar->value.nonterminal_count() : 0;
}

size_t gramhmm_grammar_size(const gramhmm_grammar* grammar) {
  return grammar ? grammar->value.size() : 0;
}

int gramhmm_grammar_equal(const gramhmm_grammar* a, const gramhmm_grammar* b) {
  if (a == nullptr || b == nullptr) return 0;
  return gramhmm::structurally_equal(a->value, b->value) ? 1 : 0;
}

gramhmm_status gramhmm_grammar_union(const gramhmm_grammar* a, const gramhmm_grammar* b,
                                     gramhmm_grammar** out) {
  return Guarded([&] {
    Require(a != nullptr && b != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_grammar{gramhmm::grammar_union(a->value, b->value)};
  });
}

gramhmm_status gramhmm_grammar_derivation_count(const gramhmm_grammar* grammar, const char* w,
                                                char** out_decimal) {
  return Guarded([&] {
    Require(grammar != nullptr && w != nullptr && out_decimal != nullptr, "null argument");
    *out_decimal = CopyString(gramhmm::derivation_count(grammar->value, w).str());
  });
}

gramhmm_status gramhmm_grammar_max_ambiguity(const gramhmm_grammar* grammar, size_t length,
                                             char** out_decimal) {
  return Guarded([&] {
    Require(grammar != nullptr && out_decimal != nullptr, "null argument");
    Require(length >= 1, "length must be >= 1");
    *out_decimal = CopyString(gramhmm::max_ambiguity(grammar->value, length).str());
  });
}

gramhmm_status gramhmm_hmm_parse(const char* text, gramhmm_hmm** out) {
  return Guarded([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_hmm{gramhmm::parse_hmm(text)};
  });
}

gramhmm_status gramhmm_hmm_load(const char* path, gramhmm_hmm** out) {
  return Guarded([&] {
    Require(out != nullptr, "null argument");
    *out = new gramhmm_hmm{gramhmm::parse_hmm(ReadFile(path))};
  });
}

gramhmm_status gramhmm_hmm_uniform(const char* alphabet, gramhmm_hmm** out) {
  return Guarded([&] {
    Require(alphabet != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_hmm{gramhmm::uniform_hmm(alphabet)};
  });
}

gramhmm_status gramhmm_hmm_random(size_t states, const char* alphabet, uint64_t seed,
                                  gramhmm_hmm** out) {
  return Guarded([&] {
    Require(alphabet != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_hmm{gramhmm::random_hmm(states, alphabet, seed)};
  });
}

void gramhmm_hmm_free(gramhmm_hmm* hmm) { delete hmm; }

gramhmm_status gramhmm_hmm_format(const gramhmm_hmm* hmm, char** out_text) {
  return Guarded([&] {
    Require(hmm != nullptr && out_text != nullptr, "null argument");
    *out_text = CopyString(gramhmm::format_hmm(hmm->value));
  });
}

gramhmm_status gramhmm_hmm_string_likelihood(const gramhmm_hmm* hmm, const char* w,
                                             double* out) {
  return Guarded([&] {
    Require(hmm != nullptr && w != nullptr && out != nullptr, "null argument");
    *out = gramhmm::string_likelihood(hmm->value, w);
  });
}

gramhmm_status gramhmm_likelihood(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                                  size_t length, gramhmm_likelihood_mode mode,
                                  int attest_unambiguous, unsigned threads, double* out_value) {
  return Guarded([&] {
    Require(grammar != nullptr && hmm != nullptr && out_value != nullptr, "null argument");
    const bool attested = attest_unambiguous != 0;
    switch (mode) {
      case GRAMHMM_MODE_WEIGHTED:
        *out_value = gramhmm::weighted_mass(grammar->value, hmm->value, length, threads).value;
        return;
      case GRAMHMM_MODE_UCFG:
        *out_value =
            gramhmm::ucfg_likelihood(grammar->value, hmm->value, length, attested, threads).value;
        return;
      case GRAMHMM_MODE_UPTO:
        *out_value =
            gramhmm::likelihood_upto(grammar->value, hmm->value, length, attested, threads).value;
        return;
    }
    gramhmm::Fail(gramhmm::ErrorKind::kInvalidArgument, "unknown likelihood mode");
  });
}

gramhmm_status gramhmm_sample(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                              size_t length, size_t count, uint64_t seed, unsigned threads,
                              gramhmm_samples** out) {
  return Guarded([&] {
    Require(grammar != nullptr && hmm != nullptr && out != nullptr, "null argument");
    auto traces = gramhmm::sample_many(grammar->value, hmm->value, length, count, seed, threads);
    auto samples = std::make_unique<gramhmm_samples>();
    samples->strings.reserve(traces.size());
    samples->trees.reserve(traces.size());
    samples->weights.reserve(traces.size());
    for (const auto& t : traces) {
      samples->strings.push_back(t.string);
      samples->trees.push_back(t.bracketed(grammar->value));
      samples->weights.push_back(t.weight);
    }
    *out = samples.release();
  });
}

size_t gramhmm_samples_count(const gramhmm_samples* samples) {
  return samples ? samples->strings.size() : 0;
}

const char* gramhmm_samples_string(const gramhmm_samples* samples, size_t index) {
  if (samples == nullptr || index >= samples->strings.size()) return nullptr;
  return samples->strings[index].c_str();
}

const char* gramhmm_samples_tree(const gramhmm_samples* samples, size_t index) {
  if (samples == nullptr || index >= samples->trees.size()) return nullptr;
  return samples->trees[index].c_str();
}

double gramhmm_samples_weight(const gramhmm_samples* samples, size_t index) {
  if (samples == nullptr || index >= samples->weights.size()) return 0.0;
  return samples->weights[index];
}

void gramhmm_samples_free(gramhmm_samples* samples) { delete samples; }

gramhmm_status gramhmm_sample_size(uint64_t bound, double epsilon, double failure,
                                   uint64_t* out) {
  return Guarded([&] {
    Require(out != nullptr, "null argument");
    *out = gramhmm::sample_size(bound, epsilon, failure);
  });
}

gramhmm_status gramhmm_fpras(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                             size_t length, double epsilon, uint64_t bound, double failure,
                             uint64_t seed, unsigned threads, gramhmm_fpras_report* out) {
  return Guarded([&] {
    Require(grammar != nullptr && hmm != nullptr && out != nullptr, "null argument");
    const auto report =
        gramhmm::fpras_likelihood(grammar->value, hmm->value, length, epsilon,
                                  gramhmm::AmbiguityBound::constant(bound), seed, failure, threads);
    *out = {report.estimate, report.z_weighted, report.samples, report.accepted,
            report.epsilon,  report.failure,    report.bound_value, report.seed.seed};
  });
}

gramhmm_status gramhmm_oracle_weighted_mass(const gramhmm_grammar* grammar,
                                            const gramhmm_hmm* hmm, size_t length,
                                            double* out) {
  return Guarded([&] {
    Require(grammar != nullptr && hmm != nullptr && out != nullptr, "null argument");
    *out = gramhmm::brute_force_weighted_mass(grammar->value, hmm->value, length);
  });
}

gramhmm_status gramhmm_oracle_likelihood(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                                         size_t length, double* out) {
  return Guarded([&] {
    Require(grammar != nullptr && hmm != nullptr && out != nullptr, "null argument");
    *out = gramhmm::brute_force_likelihood(grammar->value, hmm->value, length);
  });
}

gramhmm_status gramhmm_oracle_distribution(const gramhmm_grammar* grammar,
                                           const gramhmm_hmm* hmm, size_t length,
                                           gramhmm_distribution** out) {
  return Guarded([&] {
    Require(grammar != nullptr && hmm != nullptr && out != nullptr, "null argument");
    const auto exact = gramhmm::exact_distribution(grammar->value, hmm->value, length);
    auto dist = std::make_unique<gramhmm_distribution>();
    for (const auto& [w, p] : exact.probability) {
      dist->strings.push_back(w);
      dist->probabilities.push_back(p);
    }
    dist->z_weighted = exact.z_weighted;
    dist->likelihood = exact.likelihood;
    *out = dist.release();
  });
}

size_t gramhmm_distribution_size(const gramhmm_distribution* dist) {
  return dist ? dist->strings.size() : 0;
}

const char* gramhmm_distribution_string(const gramhmm_distribution* dist, size_t index) {
  if (dist == nullptr || index >= dist->strings.size()) return nullptr;
  return dist->strings[index].c_str();
}

double gramhmm_distribution_probability(const gramhmm_distribution* dist, size_t index) {
  if (dist == nullptr || index >= dist->probabilities.size()) return 0.0;
  return dist->probabilities[index];
}

double gramhmm_distribution_z(const gramhmm_distribution* dist) {
  return dist ? dist->z_weighted : 0.0;
}

double gramhmm_distribution_likelihood(const gramhmm_distribution* dist) {
  return dist ? dist->likelihood : 0.0;
}

void gramhmm_distribution_free(gramhmm_distribution* dist) { delete dist; }

gramhmm_status gramhmm_formula_parse_dimacs(const char* text, gramhmm_formula** out) {
  return Guarded([&] {
    Require(text != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_formula{gramhmm::parse_dimacs(text)};
  });
}

gramhmm_status gramhmm_formula_load(const char* path, gramhmm_formula** out) {
  return Guarded([&] {
    Require(out != nullptr, "null argument");
    *out = new gramhmm_formula{gramhmm::parse_dimacs(ReadFile(path))};
  });
}

void gramhmm_formula_free(gramhmm_formula* formula) { delete formula; }

size_t gramhmm_formula_variable_count(const gramhmm_formula* formula) {
  return formula ? formula->value.variable_count : 0;
}

size_t gramhmm_formula_clause_count(const gramhmm_formula* formula) {
  return formula ? formula->value.clauses.size() : 0;
}

gramhmm_status gramhmm_formula_to_grammar(const gramhmm_formula* formula,
                                          gramhmm_grammar** out) {
  return Guarded([&] {
    Require(formula != nullptr && out != nullptr, "null argument");
    *out = new gramhmm_grammar{gramhmm::formula_to_cfg(formula->value)};
  });
}

gramhmm_status gramhmm_formula_model_count(const gramhmm_formula* formula,
                                           gramhmm_count_mode mode, uint64_t seed,
                                           uint64_t* out_count, int* out_exact) {
  return Guarded([&] {
    Require(formula != nullptr && out_count != nullptr, "null argument");
    Require(mode == GRAMHMM_COUNT_BRUTEFORCE || mode == GRAMHMM_COUNT_DP, "unknown count mode");
    const auto result = gramhmm::model_count_via_likelihood(
        formula->value,
        mode == GRAMHMM_COUNT_DP ? gramhmm::ModelCountMode::kDynamicProgram
                                 : gramhmm::ModelCountMode::kBruteForceOverGrammar,
        seed);
    *out_count = result.count;
    if (out_exact != nullptr) *out_exact = result.exact ? 1 : 0;
  });
}

gramhmm_status gramhmm_formula_brute_force_count(const gramhmm_formula* formula,
                                                 uint64_t* out_count) {
  return Guarded([&] {
    Require(formula != nullptr && out_count != nullptr, "null argument");
    *out_count = gramhmm::brute_force_model_count(formula->value);
  });
}

}  // extern "C"
