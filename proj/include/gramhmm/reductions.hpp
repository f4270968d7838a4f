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

// #3SAT through grammar likelihoods: every clause becomes an unambiguous
// grammar for the assignments that falsify it, the formula becomes their
// union, and #F = 2^n (1 - f_U(L_G ∩ {0,1}^n)) under the uniform HMM U.

#ifndef GRAMHMM_REDUCTIONS_HPP_
#define GRAMHMM_REDUCTIONS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gramhmm/grammar.hpp"

namespace gramhmm {

struct Literal {
  std::uint32_t variable;  // 1-based
  bool positive;
};

using Clause = std::array<Literal, 3>;

struct Cnf3Formula {
  std::size_t variable_count = 0;
  std::vector<Clause> clauses;
};

/// DIMACS CNF; every clause must have exactly three literals.
Cnf3Formula parse_dimacs(std::string_view text);

/// Position-indexed right-linear grammar over {0,1} whose language is the
/// set of length-n assignments falsifying the clause. Requires n >= 2.
CnfGrammar clause_complement_grammar(const Clause& clause, std::size_t variable_count);

/// Iterated union of the clause grammars; f_G(w) = #clauses w falsifies.
CnfGrammar formula_to_cfg(const Cnf3Formula& formula);

enum class ModelCountMode {
  /// Membership-weighted likelihood over all 2^n strings.
  kBruteForceOverGrammar,
  /// Forward-table likelihoods of clause-subset intersections combined by
  /// inclusion–exclusion; FPRAS on the union grammar above
  /// kInclusionExclusionLimit clauses.
  kDynamicProgram,
};

inline constexpr std::size_t kInclusionExclusionLimit = 12;

struct ModelCount {
  std::uint64_t count = 0;
  bool exact = true;
  std::string method;
};

ModelCount model_count_via_likelihood(const Cnf3Formula& formula, ModelCountMode mode,
                                      std::uint64_t seed = 0);

/// Exhaustive assignment count; n <= 24.
std::uint64_t brute_force_model_count(const Cnf3Formula& formula);

}  // namespace gramhmm

#endif  // GRAMHMM_REDUCTIONS_HPP_
