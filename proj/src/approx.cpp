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

#include "gramhmm/approx.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gramhmm/error.hpp"
#include "gramhmm/inference.hpp"
#include "gramhmm/sampling.hpp"

namespace gramhmm {

AmbiguityBound AmbiguityBound::constant(std::uint64_t value) {
  return AmbiguityBound([value](std::size_t) { return value; });
}

AmbiguityBound AmbiguityBound::polynomial(double coefficient, double degree) {
  return AmbiguityBound([coefficient, degree](std::size_t length) {
    const double b = std::ceil(coefficient * std::pow(static_cast<double>(length), degree));
    if (!(b >= 1.0)) return std::uint64_t{0};
    if (b >= 0x1.0p63) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(b);
  });
}

std::uint64_t AmbiguityBound::operator()(std::size_t length) const {
  const std::uint64_t b = fn_(length);
  if (b < 1)
    Fail(ErrorKind::kInvalidArgument, "ambiguity bound must be >= 1 at length " +
                                          std::to_string(length));
  return b;
}

std::uint64_t sample_size(std::uint64_t bound, double epsilon, double failure) {
  if (bound < 1) Fail(ErrorKind::kInvalidArgument, "ambiguity bound must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    Fail(ErrorKind::kInvalidArgument, "epsilon must lie in (0, 1)");
  if (!(failure > 0.0 && failure < 1.0))
    Fail(ErrorKind::kInvalidArgument, "failure probability must lie in (0, 1)");
  const double b = static_cast<double>(bound);
  const double n = std::ceil(std::log(2.0 / failure) * b * b / (2.0 * epsilon * epsilon));
  if (n >= 0x1.0p63) Fail(ErrorKind::kInvalidArgument, "sample size overflows");
  return static_cast<std::uint64_t>(n);
}

bool exact_bernoulli(const DerivationCount& count, Rng& rng) {
  if (count < 1) Fail(ErrorKind::kInvalidArgument, "Bernoulli(1/count) needs count >= 1");
  if (count == 1) return true;
  const DerivationCount upper = count - 1;
  const std::size_t bits = boost::multiprecision::msb(upper) + 1;
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = static_cast<unsigned>(bits - (words - 1) * 64);
  const std::uint64_t top_mask =
      top_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << top_bits) - 1;
  for (;;) {
    DerivationCount draw = 0;
    for (std::size_t i = 0; i < words; ++i) {
      std::uint64_t word = rng.next_u64();
      if (i == 0) word &= top_mask;
      draw <<= 64;
      draw |= word;
    }
    if (draw < count) return draw == 0;
  }
}

FprasReport fpras_likelihood(const CnfGrammar& grammar, const Hmm& hmm,
                             std::size_t length, double epsilon,
                             const AmbiguityBound& bound, std::uint64_t seed,
                             double failure, unsigned threads) {
  FprasReport report;
  report.epsilon = epsilon;
  report.failure = failure;
  report.seed = {seed, 0};
  report.bound_value = bound(length);
  const std::uint64_t n = sample_size(report.bound_value, epsilon, failure);

  const auto table = forward_table(grammar, hmm, length, threads);
  report.z_weighted = layer_mass(table, grammar, hmm, length);
  if (report.z_weighted == 0.0) return report;

  report.samples = n;
  const std::size_t streams = (n + kTrialsPerStream - 1) / kTrialsPerStream;
  std::vector<std::uint64_t> accepted(streams, 0);
  run_streams(streams, threads, [&](std::size_t stream) {
    Rng rng({seed, stream});
    const std::uint64_t end = std::min<std::uint64_t>(n, (stream + 1) * kTrialsPerStream);
    std::uint64_t hits = 0;
    for (std::uint64_t i = stream * kTrialsPerStream; i < end; ++i) {
      const auto trace = sample(grammar, hmm, length, table, rng);
      if (exact_bernoulli(derivation_count(grammar, trace.string), rng)) ++hits;
    }
    accepted[stream] = hits;
  });
  for (auto a : accepted) report.accepted += a;
  report.estimate = report.z_weighted * static_cast<double>(report.accepted) /
                    static_cast<double>(report.samples);
  return report;
}

}  // namespace gramhmm
