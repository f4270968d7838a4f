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

#include "gramhmm/reductions.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "gramhmm/approx.hpp"
#include "gramhmm/error.hpp"
#include "gramhmm/hmm.hpp"
#include "gramhmm/inference.hpp"
#include "gramhmm/oracle.hpp"

namespace gramhmm {

namespace {

constexpr std::uint8_t kBitZero = 1;
constexpr std::uint8_t kBitOne = 2;

// Bits allowed at each position so that every clause in `clauses` is falsified.
std::vector<std::uint8_t> FalsifyingMask(const std::vector<const Clause*>& clauses,
                                         std::size_t variable_count) {
  std::vector<std::uint8_t> allowed(variable_count, kBitZero | kBitOne);
  for (const Clause* clause : clauses)
    for (const Literal& lit : *clause)
      allowed[lit.variable - 1] &= lit.positive ? kBitZero : kBitOne;
  return allowed;
}

// Q_i tracks the position; Q_i -> X_b Q_{i+1} for allowed b, Q_n -> 'b'.
// The grammar is deterministic left to right, hence unambiguous.
CnfGrammar PositionGrammar(const std::vector<std::uint8_t>& allowed,
                           const std::string& prefix) {
  const std::size_t n = allowed.size();
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(prefix + "Q" + std::to_string(i));
  const auto x0 = static_cast<NonterminalId>(names.size());
  names.push_back(prefix + "X0");
  const auto x1 = static_cast<NonterminalId>(names.size());
  names.push_back(prefix + "X1");

  std::vector<BinaryRule> binary;
  std::vector<LexicalRule> lexical;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto q = static_cast<NonterminalId>(i);
    if (allowed[i] & kBitZero) binary.push_back({q, x0, q + 1});
    if (allowed[i] & kBitOne) binary.push_back({q, x1, q + 1});
  }
  const auto last = static_cast<NonterminalId>(n - 1);
  if (allowed[n - 1] & kBitZero) lexical.push_back({last, '0'});
  if (allowed[n - 1] & kBitOne) lexical.push_back({last, '1'});
  lexical.push_back({x0, '0'});
  lexical.push_back({x1, '1'});
  return CnfGrammar(std::move(names), 0, std::move(binary), std::move(lexical));
}

void CheckClause(const Clause& clause, std::size_t variable_count) {
  for (const Literal& lit : clause)
    if (lit.variable < 1 || lit.variable > variable_count)
      Fail(ErrorKind::kValidation, "literal references variable " +
                                       std::to_string(lit.variable) + " outside 1.." +
                                       std::to_string(variable_count));
}

std::uint64_t RoundCount(double complement_probability, std::size_t n) {
  const double scale = std::ldexp(1.0, static_cast<int>(n));
  const double raw = scale * (1.0 - complement_probability);
  const double rounded = std::round(raw);
  if (std::abs(raw - rounded) > 1e-6 * scale || rounded < 0.0)
    Fail(ErrorKind::kNumerical, "internal inconsistency: model count " +
                                    std::to_string(raw) + " is not an integer");
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace

Cnf3Formula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Cnf3Formula formula;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::vector<long> pending;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first == "c") continue;
    if (first == "%") break;
    if (first == "p") {
      std::string kind;
      long vars = -1;
      long clauses = -1;
      std::string extra;
      if (have_header || !(tokens >> kind >> vars >> clauses) || kind != "cnf" ||
          vars < 1 || clauses < 1 || (tokens >> extra))
        Fail(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                    ": malformed header, expected 'p cnf <vars> <clauses>'");
      formula.variable_count = static_cast<std::size_t>(vars);
      declared_clauses = static_cast<std::size_t>(clauses);
      have_header = true;
      continue;
    }
    if (!have_header)
      Fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": clause before 'p cnf' header");

    std::istringstream body(line);
    std::string tok;
    while (body >> tok) {
      char* end = nullptr;
      const long lit = std::strtol(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0')
        Fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": bad literal '" + tok + "'");
      if (lit != 0) {
        if (static_cast<std::size_t>(std::labs(lit)) > formula.variable_count)
          Fail(ErrorKind::kValidation, "line " + std::to_string(line_no) + ": variable " +
                                           std::to_string(std::labs(lit)) + " exceeds header");
        pending.push_back(lit);
        continue;
      }
      if (pending.size() != 3)
        Fail(ErrorKind::kValidation, "line " + std::to_string(line_no) + ": clause arity " +
                                         std::to_string(pending.size()) + ", expected 3");
      Clause clause;
      for (std::size_t i = 0; i < 3; ++i)
        clause[i] = {static_cast<std::uint32_t>(std::labs(pending[i])), pending[i] > 0};
      formula.clauses.push_back(clause);
      pending.clear();
    }
  }
  if (!have_header) Fail(ErrorKind::kParse, "malformed header: missing 'p cnf' line");
  if (!pending.empty()) Fail(ErrorKind::kParse, "last clause is not terminated by 0");
  if (formula.clauses.size() != declared_clauses)
    Fail(ErrorKind::kParse, "malformed header: declares " + std::to_string(declared_clauses) +
                                " clauses, found " + std::to_string(formula.clauses.size()));
  return formula;
}

CnfGrammar clause_complement_grammar(const Clause& clause, std::size_t variable_count) {
  if (variable_count < 2)
    Fail(ErrorKind::kInvalidArgument, "clause grammar needs at least 2 variables");
  CheckClause(clause, variable_count);
  return PositionGrammar(FalsifyingMask({&clause}, variable_count), "");
}

CnfGrammar formula_to_cfg(const Cnf3Formula& formula) {
  if (formula.clauses.empty()) Fail(ErrorKind::kValidation, "formula has no clauses");
  if (formula.variable_count < 2)
    Fail(ErrorKind::kInvalidArgument, "clause grammar needs at least 2 variables");
  auto clause_grammar = [&](std::size_t j) {
    CheckClause(formula.clauses[j], formula.variable_count);
    return PositionGrammar(FalsifyingMask({&formula.clauses[j]}, formula.variable_count),
                           "c" + std::to_string(j + 1) + "_");
  };
  CnfGrammar grammar = clause_grammar(0);
  for (std::size_t j = 1; j < formula.clauses.size(); ++j)
    grammar = grammar_union(grammar, clause_grammar(j));
  return grammar;
}

ModelCount model_count_via_likelihood(const Cnf3Formula& formula, ModelCountMode mode,
                                      std::uint64_t seed) {
  const std::size_t n = formula.variable_count;
  if (n > 62) Fail(ErrorKind::kInvalidArgument, "too many variables for a 64-bit count");
  const Hmm coin = uniform_hmm("01");

  if (mode == ModelCountMode::kBruteForceOverGrammar) {
    const CnfGrammar grammar = formula_to_cfg(formula);
    return {RoundCount(brute_force_likelihood(grammar, coin, n), n), true,
            "membership-bruteforce"};
  }

  const std::size_t k = formula.clauses.size();
  if (k > kInclusionExclusionLimit) {
    const CnfGrammar grammar = formula_to_cfg(formula);
    const auto report = fpras_likelihood(grammar, coin, n, 0.05,
                                         AmbiguityBound::constant(k), seed);
    const double scale = std::ldexp(1.0, static_cast<int>(n));
    const double raw = std::max(0.0, scale * (1.0 - report.estimate));
    return {static_cast<std::uint64_t>(std::llround(raw)), false, "fpras"};
  }

  if (n < 2) Fail(ErrorKind::kInvalidArgument, "clause grammar needs at least 2 variables");
  for (const auto& clause : formula.clauses) CheckClause(clause, n);
  // f(∪ L_j) = Σ_{S ≠ ∅} (-1)^{|S|+1} f(∩_{j∈S} L_j); each intersection is
  // again a position grammar, so its mass is an exact forward-table value.
  CompensatedSum union_mass;
  for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << k); ++subset) {
    std::vector<const Clause*> chosen;
    for (std::size_t j = 0; j < k; ++j)
      if (subset >> j & 1) chosen.push_back(&formula.clauses[j]);
    const auto allowed = FalsifyingMask(chosen, n);
    bool empty = false;
    for (auto bits : allowed) empty = empty || bits == 0;
    if (empty) continue;
    const double mass = weighted_mass(PositionGrammar(allowed, ""), coin, n).value;
    union_mass.add(chosen.size() % 2 == 1 ? mass : -mass);
  }
  return {RoundCount(union_mass.value(), n), true, "inclusion-exclusion-dp"};
}

std::uint64_t brute_force_model_count(const Cnf3Formula& formula) {
  const std::size_t n = formula.variable_count;
  if (n > 24) Fail(ErrorKind::kGuard, "brute-force model counting limited to 24 variables");
  std::uint64_t count = 0;
  for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << n); ++assignment) {
    bool satisfied = true;
    for (const auto& clause : formula.clauses) {
      bool any = false;
      for (const Literal& lit : clause) {
        const bool value = (assignment >> (lit.variable - 1)) & 1;
        any = any || value == lit.positive;
      }
      if (!any) {
        satisfied = false;
        break;
      }
    }
    if (satisfied) ++count;
  }
  return count;
}

}  // namespace gramhmm
