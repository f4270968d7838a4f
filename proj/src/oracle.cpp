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

#include "gramhmm/oracle.hpp"

#include <cmath>

#include "gramhmm/error.hpp"

namespace gramhmm {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    compensation_ += (sum_ - t) + x;
  else
    compensation_ += (x - t) + sum_;
  sum_ = t;
}

namespace {

void RequireLength(std::size_t length) {
  if (length == 0) Fail(ErrorKind::kInvalidArgument, "length must be >= 1");
}

}  // namespace

double brute_force_weighted_mass(const CnfGrammar& grammar, const Hmm& hmm,
                                 std::size_t length) {
  RequireLength(length);
  CompensatedSum total;
  for_each_string(hmm.alphabet(), length, [&](const std::string& w) {
    const DerivationCount count = derivation_count_or_zero(grammar, w);
    if (count.is_zero()) return;
    total.add(count.convert_to<double>() * string_likelihood(hmm, w));
  });
  return total.value();
}

double brute_force_likelihood(const CnfGrammar& grammar, const Hmm& hmm,
                              std::size_t length) {
  RequireLength(length);
  CompensatedSum total;
  for_each_string(hmm.alphabet(), length, [&](const std::string& w) {
    if (!derivation_count_or_zero(grammar, w).is_zero())
      total.add(string_likelihood(hmm, w));
  });
  return total.value();
}

double brute_force_intersection_likelihood(const CnfGrammar& g1, const CnfGrammar& g2,
                                           const Hmm& hmm, std::size_t length) {
  RequireLength(length);
  CompensatedSum total;
  for_each_string(hmm.alphabet(), length, [&](const std::string& w) {
    if (!derivation_count_or_zero(g1, w).is_zero() &&
        !derivation_count_or_zero(g2, w).is_zero())
      total.add(string_likelihood(hmm, w));
  });
  return total.value();
}

ExactDistribution exact_distribution(const CnfGrammar& grammar, const Hmm& hmm,
                                     std::size_t length) {
  RequireLength(length);
  ExactDistribution dist;
  CompensatedSum z;
  CompensatedSum likelihood;
  for_each_string(hmm.alphabet(), length, [&](const std::string& w) {
    const DerivationCount count = derivation_count_or_zero(grammar, w);
    if (count.is_zero()) return;
    const double p = string_likelihood(hmm, w);
    if (p == 0.0) return;
    const double mass = count.convert_to<double>() * p;
    dist.probability[w] = mass;
    z.add(mass);
    likelihood.add(p);
  });
  dist.z_weighted = z.value();
  dist.likelihood = likelihood.value();
  if (!(dist.z_weighted > 0.0)) Fail(ErrorKind::kValidation, "empty constrained support");
  for (auto& [w, p] : dist.probability) p /= dist.z_weighted;
  return dist;
}

std::map<std::string, double> frequencies(const std::map<std::string, std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (const auto& [w, c] : counts) total += c;
  std::map<std::string, double> out;
  if (total == 0) return out;
  for (const auto& [w, c] : counts)
    out[w] = static_cast<double>(c) / static_cast<double>(total);
  return out;
}

double tv_distance(const std::map<std::string, double>& empirical,
                   const std::map<std::string, double>& exact) {
  CompensatedSum total;
  for (const auto& [w, p] : empirical) {
    auto it = exact.find(w);
    total.add(std::abs(p - (it == exact.end() ? 0.0 : it->second)));
  }
  for (const auto& [w, p] : exact)
    if (!empirical.count(w)) total.add(std::abs(p));
  return 0.5 * total.value();
}

double tv_distance(const std::map<std::string, double>& empirical,
                   const ExactDistribution& exact) {
  return tv_distance(empirical, exact.probability);
}

}  // namespace gramhmm
