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

#include "gramhmm/inference.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "gramhmm/error.hpp"

namespace gramhmm {

namespace {

unsigned ResolveThreads(unsigned threads) {
  if (threads != 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void CheckAlphabets(const CnfGrammar& grammar, const Hmm& hmm) {
  for (char c : grammar.alphabet()) {
    if (!hmm.symbol_index(c))
      Fail(ErrorKind::kValidation, std::string("alphabet mismatch: grammar terminal '") +
                                       c + "' is not an HMM symbol");
  }
}

// Accumulates layer l for nonterminals [first, last).
void CombineLayer(const CnfGrammar& grammar, ForwardTable& table, std::size_t l,
                  std::size_t first, std::size_t last) {
  const std::size_t n2 = table.state_count();
  auto out_layer = table.layer(l);
  for (std::size_t a = first; a < last; ++a) {
    const auto& rules = grammar.binary_rules_of(static_cast<NonterminalId>(a));
    if (rules.empty()) continue;
    double* out = out_layer.data() + a * n2 * n2;
    for (std::size_t m = 1; m < l; ++m) {
      for (auto idx : rules) {
        const auto& r = grammar.binary_rules()[idx];
        const double* left = table.block(m, r.left).data();
        const double* right = table.block(l - m, r.right).data();
        for (std::size_t s = 0; s < n2; ++s) {
          double* row = out + s * n2;
          for (std::size_t u = 0; u < n2; ++u) {
            const double x = left[s * n2 + u];
            if (x == 0.0) continue;
            const double* rrow = right + u * n2;
            for (std::size_t t = 0; t < n2; ++t) row[t] += x * rrow[t];
          }
        }
      }
    }
  }
}

void CheckLength(std::size_t length) {
  if (length == 0) Fail(ErrorKind::kInvalidArgument, "length must be >= 1");
}

}  // namespace

ForwardTable forward_table(const CnfGrammar& grammar, const Hmm& hmm,
                           std::size_t length, unsigned threads) {
  CheckLength(length);
  CheckAlphabets(grammar, hmm);
  const std::size_t n = grammar.nonterminal_count();
  const std::size_t n2 = hmm.state_count();
  ForwardTable table(length, n, n2);

  auto base = table.layer(1);
  for (const auto& r : grammar.lexical_rules()) {
    const auto m = hmm.matrix(*hmm.symbol_index(r.terminal));
    double* out = base.data() + r.lhs * n2 * n2;
    for (std::size_t i = 0; i < n2 * n2; ++i) out[i] += m[i];
  }

  const unsigned workers = std::min<unsigned>(ResolveThreads(threads),
                                              static_cast<unsigned>(n));
  for (std::size_t l = 2; l <= length; ++l) {
    if (workers <= 1) {
      CombineLayer(grammar, table, l, 0, n);
      continue;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      std::size_t first = n * w / workers;
      std::size_t last = n * (w + 1) / workers;
      pool.emplace_back([&, l, first, last] { CombineLayer(grammar, table, l, first, last); });
    }
    for (auto& t : pool) t.join();
  }
  return table;
}

double layer_mass(const ForwardTable& table, const CnfGrammar& grammar,
                  const Hmm& hmm, std::size_t l) {
  if (l == 0 || l > table.length())
    Fail(ErrorKind::kInvalidArgument, "layer " + std::to_string(l) + " not in table");
  if (table.nonterminal_count() != grammar.nonterminal_count() ||
      table.state_count() != hmm.state_count())
    Fail(ErrorKind::kValidation, "forward table does not match grammar/HMM dimensions");
  const std::size_t n2 = hmm.state_count();
  auto block = table.block(l, grammar.start());
  auto pi = hmm.initial();
  double total = 0.0;
  for (std::size_t s = 0; s < n2; ++s) {
    if (pi[s] == 0.0) continue;
    double row = 0.0;
    for (std::size_t t = 0; t < n2; ++t) row += block[s * n2 + t];
    total += pi[s] * row;
  }
  return total;
}

LikelihoodResult weighted_mass(const CnfGrammar& grammar, const Hmm& hmm,
                               std::size_t length, unsigned threads) {
  auto table = forward_table(grammar, hmm, length, threads);
  return {layer_mass(table, grammar, hmm, length), length, LikelihoodMode::kWeightedMass};
}

namespace {

void RequireAttestation(bool attested) {
  if (!attested)
    Fail(ErrorKind::kInvalidArgument,
         "exact likelihood requires the caller to attest that the grammar is unambiguous");
}

void CheckProbability(double value, std::size_t length) {
  if (value > 1.0 + 1e-9)
    Fail(ErrorKind::kNumerical, "ambiguity attestation violated: mass " +
                                    std::to_string(value) + " at length " +
                                    std::to_string(length) + " exceeds 1");
}

}  // namespace

LikelihoodResult ucfg_likelihood(const CnfGrammar& grammar, const Hmm& hmm,
                                 std::size_t length, bool unambiguity_attested,
                                 unsigned threads) {
  RequireAttestation(unambiguity_attested);
  auto result = weighted_mass(grammar, hmm, length, threads);
  CheckProbability(result.value, length);
  result.mode = LikelihoodMode::kUcfgExact;
  return result;
}

LikelihoodResult likelihood_upto(const CnfGrammar& grammar, const Hmm& hmm,
                                 std::size_t length, bool unambiguity_attested,
                                 unsigned threads) {
  RequireAttestation(unambiguity_attested);
  auto table = forward_table(grammar, hmm, length, threads);
  double total = 0.0;
  for (std::size_t l = 1; l <= length; ++l) {
    double mass = layer_mass(table, grammar, hmm, l);
    CheckProbability(mass, l);
    total += mass;
  }
  return {total, length, LikelihoodMode::kUptoLength};
}

std::size_t PairShuffle::forward(std::size_t source) const {
  const std::size_t l = source % pair_dim;
  source /= pair_dim;
  const std::size_t k = source % nonterminals;
  source /= nonterminals;
  const std::size_t j = source % pair_dim;
  const std::size_t i = source / pair_dim;
  return ((i * nonterminals + k) * pair_dim + j) * pair_dim + l;
}

std::size_t PairShuffle::inverse(std::size_t target) const {
  const std::size_t l = target % pair_dim;
  target /= pair_dim;
  const std::size_t j = target % pair_dim;
  target /= pair_dim;
  const std::size_t k = target % nonterminals;
  const std::size_t i = target / nonterminals;
  return ((i * pair_dim + j) * nonterminals + k) * pair_dim + l;
}

}  // namespace gramhmm
