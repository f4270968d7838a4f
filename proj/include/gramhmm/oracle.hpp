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

// Brute-force references over Σ^L. Everything here enumerates strings and
// calls derivation_count and string_likelihood directly, never the forward
// table, so it can serve as ground truth for the dynamic programs.

#ifndef GRAMHMM_ORACLE_HPP_
#define GRAMHMM_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"

namespace gramhmm {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Σ_{w ∈ Σ^L} f_G(w) · f_A(w), Σ being the HMM's alphabet.
double brute_force_weighted_mass(const CnfGrammar& grammar, const Hmm& hmm,
                                 std::size_t length);

/// Σ_{w ∈ L_G ∩ Σ^L} f_A(w): membership, not multiplicity.
double brute_force_likelihood(const CnfGrammar& grammar, const Hmm& hmm,
                              std::size_t length);

/// Σ_{w ∈ L_{G1} ∩ L_{G2} ∩ Σ^L} f_A(w).
double brute_force_intersection_likelihood(const CnfGrammar& g1, const CnfGrammar& g2,
                                           const Hmm& hmm, std::size_t length);

struct ExactDistribution {
  std::map<std::string, double> probability;  // f_G(w) f_A(w) / Z, support only
  double z_weighted = 0.0;                    // Z
  double likelihood = 0.0;                    // f_A(L_G ∩ Σ^L)
};

/// Throws ErrorKind::kValidation ("empty constrained support") when Z = 0.
ExactDistribution exact_distribution(const CnfGrammar& grammar, const Hmm& hmm,
                                     std::size_t length);

/// Empirical frequencies from raw counts.
std::map<std::string, double> frequencies(const std::map<std::string, std::uint64_t>& counts);

/// (1/2) Σ_w |p̂(w) - p(w)| over the union of both supports.
double tv_distance(const std::map<std::string, double>& empirical,
                   const std::map<std::string, double>& exact);
double tv_distance(const std::map<std::string, double>& empirical,
                   const ExactDistribution& exact);

}  // namespace gramhmm

#endif  // GRAMHMM_ORACLE_HPP_
