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

// Forward tables: the grammar-HMM product dynamic program over lengths.
//
// Layer l stores, for every nonterminal a and state pair (s, t),
//
//   F_l[a][s][t] = Σ_{w ∈ Σ^l} (#trees rooted at a yielding w) · A_w[s, t]
//
// and is built from shorter layers by
//
//   F_l[a][s][t] = Σ_{a→bc} Σ_{m=1}^{l-1} Σ_u F_m[b][s][u] · F_{l-m}[c][u][t].
//
// This is the Kronecker/permutation recursion with the grammar tensor applied
// rule by rule, the HMM pairing tensor applied through the middle state u and
// the interleaving permutation applied as index bookkeeping; none of them is
// materialized. Cost is O(L^2 · |G| · n'^3).

#ifndef GRAMHMM_INFERENCE_HPP_
#define GRAMHMM_INFERENCE_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"

namespace gramhmm {

class ForwardTable {
 public:
  ForwardTable(std::size_t length, std::size_t nonterminals, std::size_t states)
      : length_(length),
        nonterminals_(nonterminals),
        states_(states),
        data_(length * nonterminals * states * states, 0.0) {}

  std::size_t length() const { return length_; }
  std::size_t nonterminal_count() const { return nonterminals_; }
  std::size_t state_count() const { return states_; }

  /// Layer l (1-based) as a flat [a][s][t] array.
  std::span<const double> layer(std::size_t l) const {
    return {data_.data() + offset(l, 0), nonterminals_ * states_ * states_};
  }
  std::span<double> layer(std::size_t l) {
    return {data_.data() + offset(l, 0), nonterminals_ * states_ * states_};
  }
  /// The n'×n' block of nonterminal a in layer l.
  std::span<const double> block(std::size_t l, std::size_t a) const {
    return {data_.data() + offset(l, a), states_ * states_};
  }
  double at(std::size_t l, std::size_t a, std::size_t s, std::size_t t) const {
    return data_[offset(l, a) + s * states_ + t];
  }

 private:
  std::size_t offset(std::size_t l, std::size_t a) const {
    return ((l - 1) * nonterminals_ + a) * states_ * states_;
  }

  std::size_t length_;
  std::size_t nonterminals_;
  std::size_t states_;
  std::vector<double> data_;
};

/// Builds layers 1..length. The combine step may be split across `threads`
/// workers (0 = all cores); workers own disjoint nonterminals and every
/// output entry accumulates in the fixed order (m, rule, u) ascending, so the
/// table is bit-identical for any thread count.
ForwardTable forward_table(const CnfGrammar& grammar, const Hmm& hmm,
                           std::size_t length, unsigned threads = 1);

/// Σ_{s,t} π'[s] · F_l[start][s][t].
double layer_mass(const ForwardTable& table, const CnfGrammar& grammar,
                  const Hmm& hmm, std::size_t l);

enum class LikelihoodMode { kWeightedMass, kUcfgExact, kUptoLength };

struct LikelihoodResult {
  double value = 0.0;
  std::size_t length = 0;
  LikelihoodMode mode = LikelihoodMode::kWeightedMass;
};

/// Z = Σ_{w ∈ Σ^L} f_G(w) · f_A(w); meaningful for any grammar.
LikelihoodResult weighted_mass(const CnfGrammar& grammar, const Hmm& hmm,
                               std::size_t length, unsigned threads = 1);

/// f_A(L_G ∩ Σ^L) for a grammar the caller attests to be unambiguous. A
/// result above 1 + 1e-9 exposes a false attestation and throws
/// ErrorKind::kNumerical.
LikelihoodResult ucfg_likelihood(const CnfGrammar& grammar, const Hmm& hmm,
                                 std::size_t length, bool unambiguity_attested,
                                 unsigned threads = 1);

/// Σ_{l=1}^{L} f_A(L_G ∩ Σ^l) from one table. The > 1 check applies to each
/// length separately.
LikelihoodResult likelihood_upto(const CnfGrammar& grammar, const Hmm& hmm,
                                 std::size_t length, bool unambiguity_attested,
                                 unsigned threads = 1);

/// The interleaving permutation of the combine step: coordinates
/// (i, j, k, l) ∈ [n]×[n'^2]×[n]×[n'^2] map to (i, k, j, l) ∈
/// [n]×[n]×[n'^2]×[n'^2]. Flat indices are row-major in each layout.
struct PairShuffle {
  std::size_t nonterminals;
  std::size_t pair_dim;  // n'^2

  using Coord = std::array<std::size_t, 4>;

  static Coord swap_middle(const Coord& c) { return {c[0], c[2], c[1], c[3]}; }
  std::size_t size() const {
    return nonterminals * nonterminals * pair_dim * pair_dim;
  }
  /// Flat index in the source layout → flat index in the target layout.
  std::size_t forward(std::size_t source) const;
  std::size_t inverse(std::size_t target) const;
};

}  // namespace gramhmm

#endif  // GRAMHMM_INFERENCE_HPP_
