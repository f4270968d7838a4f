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

// Hidden Markov models in observable-operator form: an initial distribution
// and one nonnegative transition/emission matrix per symbol, whose sum is
// row-stochastic.

#ifndef GRAMHMM_HMM_HPP_
#define GRAMHMM_HMM_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gramhmm {

/// Tolerance applied to the stochasticity checks.
inline constexpr double kStochasticTolerance = 1e-9;

class Hmm {
 public:
  /// matrices[k] is the n'×n' operator of alphabet[k], flattened row-major:
  /// entry (s, t) lives at s * n' + t. Throws ErrorKind::kValidation when an
  /// invariant fails.
  Hmm(std::size_t state_count, std::string alphabet, std::vector<double> initial,
      std::vector<std::vector<double>> matrices);

  std::size_t state_count() const { return state_count_; }
  const std::string& alphabet() const { return alphabet_; }
  std::span<const double> initial() const { return initial_; }

  std::optional<std::size_t> symbol_index(char c) const;

  std::span<const double> matrix(std::size_t symbol) const {
    return matrices_[symbol];
  }
  double at(std::size_t symbol, std::size_t from, std::size_t to) const {
    return matrices_[symbol][from * state_count_ + to];
  }

 private:
  std::size_t state_count_;
  std::string alphabet_;
  std::vector<double> initial_;
  std::vector<std::vector<double>> matrices_;
};

/// Parses the JSON document
///   {"states": n, "alphabet": ["a", ...], "initial": [...],
///    "matrices": {"a": [[...], ...], ...}}
Hmm parse_hmm(std::string_view text);

/// Serializes with round-trip precision.
std::string format_hmm(const Hmm& hmm);

/// f(w) = π'ᵀ · A_{w_1} ⋯ A_{w_L} · 1.
double string_likelihood(const Hmm& hmm, std::string_view w);

/// f(w) through the factorization w = w[0, cut) · w[cut, |w|): the operator
/// products of both halves are contracted over the shared middle state.
/// Requires 1 <= cut < |w|.
double split_likelihood(const Hmm& hmm, std::string_view w, std::size_t cut);

/// Single state, every symbol weighted 1/|Σ|.
Hmm uniform_hmm(std::string_view alphabet);

/// Seeded random model; every row of Σ_σ A_σ and the initial vector are
/// normalized exponential draws.
Hmm random_hmm(std::size_t state_count, std::string_view alphabet,
               std::uint64_t seed);

}  // namespace gramhmm

#endif  // GRAMHMM_HMM_HPP_
