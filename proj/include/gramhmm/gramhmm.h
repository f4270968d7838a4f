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

/*
 * C interface to gramhmm. Objects are opaque handles owned by the caller and
 * released with the matching *_free function. Every fallible call returns a
 * gramhmm_status; on failure gramhmm_last_error() describes the problem for
 * the calling thread. Strings returned through char** must be released with
 * gramhmm_string_free; const char* results are owned by their handle.
 */

#ifndef GRAMHMM_GRAMHMM_H_
#define GRAMHMM_GRAMHMM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(GRAMHMM_BUILDING_LIBRARY)
#define GRAMHMM_API __attribute__((visibility("default")))
#else
#define GRAMHMM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gramhmm_status {
  GRAMHMM_OK = 0,
  GRAMHMM_ERR_INVALID_ARGUMENT = 1,
  GRAMHMM_ERR_PARSE = 2,
  GRAMHMM_ERR_VALIDATION = 3,
  GRAMHMM_ERR_NUMERICAL = 4,
  GRAMHMM_ERR_GUARD = 5,
  GRAMHMM_ERR_IO = 6,
  GRAMHMM_ERR_INTERNAL = 7
} gramhmm_status;

typedef enum gramhmm_likelihood_mode {
  GRAMHMM_MODE_WEIGHTED = 0, /* Σ_w f_G(w) f_A(w), any grammar */
  GRAMHMM_MODE_UCFG = 1,     /* exact f_A(L_G ∩ Σ^L), attested unambiguous */
  GRAMHMM_MODE_UPTO = 2      /* Σ_{l<=L} of the UCFG value */
} gramhmm_likelihood_mode;

typedef enum gramhmm_count_mode {
  GRAMHMM_COUNT_BRUTEFORCE = 0,
  GRAMHMM_COUNT_DP = 1
} gramhmm_count_mode;

typedef struct gramhmm_grammar gramhmm_grammar;
typedef struct gramhmm_hmm gramhmm_hmm;
typedef struct gramhmm_samples gramhmm_samples;
typedef struct gramhmm_distribution gramhmm_distribution;
typedef struct gramhmm_formula gramhmm_formula;

typedef struct gramhmm_fpras_report {
  double estimate;
  double z_weighted;
  uint64_t samples;
  uint64_t accepted;
  double epsilon;
  double failure;
  uint64_t bound_value;
  uint64_t seed;
} gramhmm_fpras_report;

GRAMHMM_API const char* gramhmm_version(void);
GRAMHMM_API const char* gramhmm_last_error(void);
GRAMHMM_API void gramhmm_string_free(char* text);

/* Grammars */
GRAMHMM_API gramhmm_status gramhmm_grammar_parse(const char* text, gramhmm_grammar** out);
GRAMHMM_API gramhmm_status gramhmm_grammar_load(const char* path, gramhmm_grammar** out);
GRAMHMM_API void gramhmm_grammar_free(gramhmm_grammar* grammar);
GRAMHMM_API gramhmm_status gramhmm_grammar_format(const gramhmm_grammar* grammar, char** out_text);
GRAMHMM_API size_t gramhmm_grammar_nonterminal_count(const gramhmm_grammar* grammar);
GRAMHMM_API size_t gramhmm_grammar_size(const gramhmm_grammar* grammar);
/* 1 when both grammars have the same start name and named rule sets. */
GRAMHMM_API int gramhmm_grammar_equal(const gramhmm_grammar* a, const gramhmm_grammar* b);
GRAMHMM_API gramhmm_status gramhmm_grammar_union(const gramhmm_grammar* a, const gramhmm_grammar* b,
                                                 gramhmm_grammar** out);
/* Counts are returned as decimal strings; they are unbounded integers. */
GRAMHMM_API gramhmm_status gramhmm_grammar_derivation_count(const gramhmm_grammar* grammar,
                                                            const char* w, char** out_decimal);
GRAMHMM_API gramhmm_status gramhmm_grammar_max_ambiguity(const gramhmm_grammar* grammar,
                                                         size_t length, char** out_decimal);

/* HMMs */
GRAMHMM_API gramhmm_status gramhmm_hmm_parse(const char* text, gramhmm_hmm** out);
GRAMHMM_API gramhmm_status gramhmm_hmm_load(const char* path, gramhmm_hmm** out);
GRAMHMM_API gramhmm_status gramhmm_hmm_uniform(const char* alphabet, gramhmm_hmm** out);
GRAMHMM_API gramhmm_status gramhmm_hmm_random(size_t states, const char* alphabet, uint64_t seed,
                                              gramhmm_hmm** out);
GRAMHMM_API void gramhmm_hmm_free(gramhmm_hmm* hmm);
GRAMHMM_API gramhmm_status gramhmm_hmm_format(const gramhmm_hmm* hmm, char** out_text);
GRAMHMM_API gramhmm_status gramhmm_hmm_string_likelihood(const gramhmm_hmm* hmm, const char* w,
                                                         double* out);

/* Exact likelihoods. threads = 0 uses every core; results do not depend on it. */
GRAMHMM_API gramhmm_status gramhmm_likelihood(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                                              size_t length, gramhmm_likelihood_mode mode,
                                              int attest_unambiguous, unsigned threads,
                                              double* out_value);

/* Sampling */
GRAMHMM_API gramhmm_status gramhmm_sample(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                                          size_t length, size_t count, uint64_t seed,
                                          unsigned threads, gramhmm_samples** out);
GRAMHMM_API size_t gramhmm_samples_count(const gramhmm_samples* samples);
GRAMHMM_API const char* gramhmm_samples_string(const gramhmm_samples* samples, size_t index);
/* Bracketed derivation, e.g. "(S (A 'a') (B 'b'))". */
GRAMHMM_API const char* gramhmm_samples_tree(const gramhmm_samples* samples, size_t index);
GRAMHMM_API double gramhmm_samples_weight(const gramhmm_samples* samples, size_t index);
GRAMHMM_API void gramhmm_samples_free(gramhmm_samples* samples);

/* Randomized approximation for bounded-ambiguity grammars */
GRAMHMM_API gramhmm_status gramhmm_sample_size(uint64_t bound, double epsilon, double failure,
                                               uint64_t* out);
GRAMHMM_API gramhmm_status gramhmm_fpras(const gramhmm_grammar* grammar, const gramhmm_hmm* hmm,
                                         size_t length, double epsilon, uint64_t bound,
                                         double failure, uint64_t seed, unsigned threads,
                                         gramhmm_fpras_report* out);

/* Brute-force oracles (subject to the GRAMHMM_ORACLE_GUARD enumeration limit) */
GRAMHMM_API gramhmm_status gramhmm_oracle_weighted_mass(const gramhmm_grammar* grammar,
                                                        const gramhmm_hmm* hmm, size_t length,
                                                        double* out);
GRAMHMM_API gramhmm_status gramhmm_oracle_likelihood(const gramhmm_grammar* grammar,
                                                     const gramhmm_hmm* hmm, size_t length,
                                                     double* out);
GRAMHMM_API gramhmm_status gramhmm_oracle_distribution(const gramhmm_grammar* grammar,
                                                       const gramhmm_hmm* hmm, size_t length,
                                                       gramhmm_distribution** out);
GRAMHMM_API size_t gramhmm_distribution_size(const gramhmm_distribution* dist);
GRAMHMM_API const char* gramhmm_distribution_string(const gramhmm_distribution* dist, size_t index);
GRAMHMM_API double gramhmm_distribution_probability(const gramhmm_distribution* dist, size_t index);
GRAMHMM_API double gramhmm_distribution_z(const gramhmm_distribution* dist);
GRAMHMM_API double gramhmm_distribution_likelihood(const gramhmm_distribution* dist);
GRAMHMM_API void gramhmm_distribution_free(gramhmm_distribution* dist);

/* #3SAT reduction */
GRAMHMM_API gramhmm_status gramhmm_formula_parse_dimacs(const char* text, gramhmm_formula** out);
GRAMHMM_API gramhmm_status gramhmm_formula_load(const char* path, gramhmm_formula** out);
GRAMHMM_API void gramhmm_formula_free(gramhmm_formula* formula);
GRAMHMM_API size_t gramhmm_formula_variable_count(const gramhmm_formula* formula);
GRAMHMM_API size_t gramhmm_formula_clause_count(const gramhmm_formula* formula);
GRAMHMM_API gramhmm_status gramhmm_formula_to_grammar(const gramhmm_formula* formula,
                                                      gramhmm_grammar** out);
/* out_exact is set to 0 when the DP mode fell back to sampling. */
GRAMHMM_API gramhmm_status gramhmm_formula_model_count(const gramhmm_formula* formula,
                                                       gramhmm_count_mode mode, uint64_t seed,
                                                       uint64_t* out_count, int* out_exact);
GRAMHMM_API gramhmm_status gramhmm_formula_brute_force_count(const gramhmm_formula* formula,
                                                             uint64_t* out_count);

#ifdef __cplusplus
}
#endif

#endif /* GRAMHMM_GRAMHMM_H_ */
