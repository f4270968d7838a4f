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

// Randomized approximation of f_A(L_G ∩ Σ^L) for grammars of bounded
// ambiguity: draw proposals with probability f_G(w)·f_A(w)/Z, accept each
// with probability exactly 1/f_G(w), and scale the acceptance rate by Z.

#ifndef GRAMHMM_APPROX_HPP_
#define GRAMHMM_APPROX_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>

#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"
#include "gramhmm/rng.hpp"

namespace gramhmm {

/// B(L) >= max_{w ∈ Σ^L} f_G(w), supplied by the caller.
class AmbiguityBound {
 public:
  static AmbiguityBound constant(std::uint64_t value);
  /// ceil(coefficient · L^degree).
  static AmbiguityBound polynomial(double coefficient, double degree);

  explicit AmbiguityBound(std::function<std::uint64_t(std::size_t)> fn)
      : fn_(std::move(fn)) {}

  /// Throws ErrorKind::kInvalidArgument when the bound evaluates below 1.
  std::uint64_t operator()(std::size_t length) const;

 private:
  std::function<std::uint64_t(std::size_t)> fn_;
};

inline constexpr double kDefaultFailureProbability = 0.25;

/// Smallest N with 2·exp(-2N(ε/B)^2) <= failure, i.e.
/// N = ceil(ln(2/failure) · B^2 / (2ε^2)).
std::uint64_t sample_size(std::uint64_t bound, double epsilon,
                          double failure = kDefaultFailureProbability);

/// True with probability exactly 1/count: a uniform integer in [0, count)
/// drawn by rejection from random bit blocks, compared with zero.
bool exact_bernoulli(const DerivationCount& count, Rng& rng);

struct FprasReport {
  double estimate = 0.0;    // z_weighted · accepted / samples
  double z_weighted = 0.0;  // Z
  std::uint64_t samples = 0;
  std::uint64_t accepted = 0;
  double epsilon = 0.0;
  double failure = kDefaultFailureProbability;
  std::uint64_t bound_value = 0;
  RngSeed seed;
};

/// Proposal/accept trials run in streams of this size; stream i draws from
/// RngSeed{seed, i}.
inline constexpr std::size_t kTrialsPerStream = 1024;

/// Estimates f_A(L_G ∩ Σ^L) within relative error ε with probability at
/// least 1 - failure, provided `bound` is valid at L. Returns 0 without
/// sampling when Z = 0. Results do not depend on `threads`.
FprasReport fpras_likelihood(const CnfGrammar& grammar, const Hmm& hmm,
                             std::size_t length, double epsilon,
                             const AmbiguityBound& bound, std::uint64_t seed,
                             double failure = kDefaultFailureProbability,
                             unsigned threads = 1);

}  // namespace gramhmm

#endif  // GRAMHMM_APPROX_HPP_
