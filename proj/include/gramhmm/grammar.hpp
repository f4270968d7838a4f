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

// Context-free grammars in Chomsky normal form: representation, the text
// format, derivation counting and language enumeration.

#ifndef GRAMHMM_GRAMMAR_HPP_
#define GRAMHMM_GRAMMAR_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gramhmm {

/// Number of derivation trees; unbounded because counts grow exponentially
/// with the string length for ambiguous grammars.
using DerivationCount = boost::multiprecision::cpp_int;

using NonterminalId = std::uint32_t;

/// a -> b c
struct BinaryRule {
  NonterminalId lhs;
  NonterminalId left;
  NonterminalId right;

  friend bool operator==(const BinaryRule&, const BinaryRule&) = default;
};

/// a -> 'x'
struct LexicalRule {
  NonterminalId lhs;
  char terminal;

  friend bool operator==(const LexicalRule&, const LexicalRule&) = default;
};

/// Immutable CNF grammar. Nonterminals are dense indices into names();
/// rule order is preserved from construction and fixes the accumulation
/// order of every downstream dynamic program.
class CnfGrammar {
 public:
  /// Validates the invariants: rules reference declared nonterminals, no
  /// duplicate rules or names, at least one rule.
  CnfGrammar(std::vector<std::string> names, NonterminalId start,
             std::vector<BinaryRule> binary_rules,
             std::vector<LexicalRule> lexical_rules);

  std::size_t nonterminal_count() const { return names_.size(); }
  NonterminalId start() const { return start_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(NonterminalId id) const { return names_.at(id); }

  const std::vector<BinaryRule>& binary_rules() const { return binary_rules_; }
  const std::vector<LexicalRule>& lexical_rules() const {
    return lexical_rules_;
  }
  /// Indices into binary_rules() with the given left-hand side, ascending.
  const std::vector<std::uint32_t>& binary_rules_of(NonterminalId lhs) const {
    return binary_by_lhs_[lhs];
  }
  const std::vector<std::uint32_t>& lexical_rules_of(NonterminalId lhs) const {
    return lexical_by_lhs_[lhs];
  }

  /// |G|, the number of productions.
  std::size_t size() const {
    return binary_rules_.size() + lexical_rules_.size();
  }

  /// Terminals used by lexical rules, sorted by byte value.
  const std::string& alphabet() const { return alphabet_; }
  bool has_terminal(char c) const {
    return alphabet_.find(c) != std::string::npos;
  }

 private:
  std::vector<std::string> names_;
  NonterminalId start_;
  std::vector<BinaryRule> binary_rules_;
  std::vector<LexicalRule> lexical_rules_;
  std::vector<std::vector<std::uint32_t>> binary_by_lhs_;
  std::vector<std::vector<std::uint32_t>> lexical_by_lhs_;
  std::string alphabet_;
};

/// Parses the line-oriented grammar format:
///
///     # comment
///     start S
///     S -> A B
///     A -> 'a'
///
/// Nonterminals are interned in order of first appearance, the start header
/// included. Errors carry "line:column" positions.
CnfGrammar parse_grammar(std::string_view text);

/// Inverse of parse_grammar. The output reparses to a structurally equal
/// grammar.
std::string format_grammar(const CnfGrammar& grammar);

/// Equality up to renumbering: same start name, same named rule sets.
bool structurally_equal(const CnfGrammar& a, const CnfGrammar& b);

/// Per-nonterminal count of derivation trees yielding w, by CYK tabulation
/// over all spans. Throws if w is empty or uses a terminal outside the
/// grammar's alphabet.
std::vector<DerivationCount> inside_vector(const CnfGrammar& grammar,
                                           std::string_view w);

/// f_G(w): derivation trees rooted at the start symbol.
DerivationCount derivation_count(const CnfGrammar& grammar, std::string_view w);

/// Like derivation_count, but strings with foreign terminals count zero.
/// Used when enumerating over a larger alphabet (e.g. an HMM's).
DerivationCount derivation_count_or_zero(const CnfGrammar& grammar,
                                         std::string_view w);

/// Grammar for L(g1) ∪ L(g2) with f(w) = f1(w) + f2(w). A fresh start symbol
/// copies every start production of both operands; names of g2 that clash
/// with g1 are suffixed.
CnfGrammar grammar_union(const CnfGrammar& g1, const CnfGrammar& g2);

/// Upper limit on |Σ|^L for brute-force enumeration. 10^7 unless the
/// GRAMHMM_ORACLE_GUARD environment variable overrides it.
std::uint64_t enumeration_guard();

/// Calls visit(w) for every w ∈ alphabet^length in lexicographic order of the
/// alphabet as given. Throws ErrorKind::kGuard past enumeration_guard().
void for_each_string(std::string_view alphabet, std::size_t length,
                     const std::function<void(const std::string&)>& visit);

/// L_G ∩ Σ^length over the grammar's own alphabet, lexicographic.
std::vector<std::string> enumerate_language(const CnfGrammar& grammar,
                                            std::size_t length);

/// max over w ∈ Σ^length of f_G(w).
DerivationCount max_ambiguity(const CnfGrammar& grammar, std::size_t length);

}  // namespace gramhmm

#endif  // GRAMHMM_GRAMMAR_HPP_
