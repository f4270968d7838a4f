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

// Exact sampling of strings w ∈ Σ^L with probability f_G(w)·f_A(w)/Z by
// ancestral sampling of a derivation over (nonterminal, state pair) labels,
// using a forward table as inside weights.

#ifndef GRAMHMM_SAMPLING_HPP_
#define GRAMHMM_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"
#include "gramhmm/inference.hpp"
#include "gramhmm/rng.hpp"

namespace gramhmm {

/// One node of a sampled derivation, labelled (nonterminal, from, to).
/// Internal nodes record the chosen rule, split and middle state; leaves
/// record the emitted terminal.
struct DerivationNode {
  NonterminalId nonterminal = 0;
  std::size_t begin = 0;
  std::size_t length = 0;
  std::size_t from_state = 0;
  std::size_t to_state = 0;
  std::int64_t rule = -1;   // binary rule index, -1 at leaves
  std::size_t split = 0;    // length of the left child
  std::size_t mid_state = 0;
  std::int64_t left = -1;   // child node indices
  std::int64_t right = -1;
  char terminal = '\0';
  /// Sum of the local choice weights divided by the table entry of this
  /// node; 1 up to rounding when the table matches the grammar.
  double local_mass = 0.0;
};

struct SampleTrace {
  std::string string;
  std::vector<DerivationNode> tree;  // preorder, tree[0] is the root
  /// π'[root from-state] times the emitted operator entries along the leaves.
  double weight = 0.0;

  /// "(S (A 'a') (B 'b'))"
  std::string bracketed(const CnfGrammar& grammar) const;
};

/// Draws one string of the given length (<= table.length()). Throws
/// ErrorKind::kValidation with "empty constrained support" when Z = 0, and
/// ErrorKind::kNumerical on a node whose local weights underflow.
SampleTrace sample(const CnfGrammar& grammar, const Hmm& hmm, std::size_t length,
                   const ForwardTable& table, Rng& rng);

/// Samples are generated in streams of this many draws; stream i uses
/// RngSeed{seed, i}.
inline constexpr std::size_t kSamplesPerStream = 4096;

/// `count` independent draws from one forward table. Output order is the
/// concatenation of streams, independent of `threads`.
std::vector<SampleTrace> sample_many(const CnfGrammar& grammar, const Hmm& hmm,
                                     std::size_t length, std::size_t count,
                                     std::uint64_t seed, unsigned threads = 1);

/// Runs body(stream_index) for streams [0, streams) on up to `threads`
/// workers (0 = all cores). Shared with the estimator in approx.
void run_streams(std::size_t streams, unsigned threads,
                 const std::function<void(std::size_t)>& body);

}  // namespace gramhmm

#endif  // GRAMHMM_SAMPLING_HPP_
