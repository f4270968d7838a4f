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

#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "gramhmm/approx.hpp"
#include "gramhmm/error.hpp"
#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"
#include "gramhmm/inference.hpp"
#include "gramhmm/oracle.hpp"
#include "gramhmm/rng.hpp"
#include "test_support.hpp"

using namespace gramhmm;

TEST_CASE("sample size") {
  CHECK(sample_size(2, 0.1) == 416);
  CHECK(sample_size(1, 0.5) == 5);
  CHECK(sample_size(1, 0.5, 0.25) == 5);
  CHECK_THROWS_AS(sample_size(1, 0.0), Error);
  CHECK_THROWS_AS(sample_size(0, 0.1), Error);
  CHECK_THROWS_AS(sample_size(1, 0.1, 1.0), Error);
}

TEST_CASE("ambiguity bounds") {
  CHECK(AmbiguityBound::constant(3)(10) == 3);
  CHECK(AmbiguityBound::polynomial(1.0, 2.0)(5) == 25);
  CHECK(AmbiguityBound::polynomial(0.5, 1.0)(3) == 2);
  CHECK_THROWS_AS(AmbiguityBound::constant(0)(1), Error);
}

TEST_CASE("exact Bernoulli") {
  Rng rng({1, 0});
  for (int i = 0; i < 1000; ++i) CHECK(exact_bernoulli(1, rng));
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += exact_bernoulli(2, rng);
  CHECK(std::abs(hits / 100000.0 - 0.5) <= 0.006);
  hits = 0;
  for (int i = 0; i < 120000; ++i) hits += exact_bernoulli(6, rng);
  CHECK(std::abs(hits / 120000.0 - 1.0 / 6.0) <= 0.005);
  CHECK_THROWS_AS(exact_bernoulli(0, rng), Error);
}

TEST_CASE("exact Bernoulli with counts beyond 64 bits") {
  // count = 2^64 + 2: a draw of zero has probability below 2^-64, and the
  // rejection loop must terminate on the two-word range.
  DerivationCount count = DerivationCount(1) << 64;
  count += 2;
  Rng rng({2, 0});
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += exact_bernoulli(count, rng);
  CHECK(hits == 0);
  // count = 3 · 2^62 leaves a top block of 2 bits with rejection.
  DerivationCount three = DerivationCount(3) << 62;
  for (int i = 0; i < 10000; ++i) hits += exact_bernoulli(three, rng);
  CHECK(hits == 0);
}

TEST_CASE("estimator on a doubled universal grammar") {
  auto all = testing::Universal("ab");
  auto twice = grammar_union(all, all);
  auto h = uniform_hmm("ab");
  int good = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = fpras_likelihood(twice, h, 3, 0.1, AmbiguityBound::constant(2), seed);
    CHECK(r.samples == 416);
    CHECK(r.bound_value == 2);
    CHECK(std::abs(r.z_weighted - 2.0) <= 1e-12);
    good += std::abs(r.estimate - 1.0) <= 0.1;
  }
  CHECK(good >= 15);
}

TEST_CASE("empty support returns early") {
  auto r = fpras_likelihood(testing::Dyck(), uniform_hmm("()"), 3, 0.1, AmbiguityBound::constant(1), 0);
  CHECK(r.estimate == 0.0);
  CHECK(r.samples == 0);
  CHECK(r.accepted == 0);
}

TEST_CASE("unit bound accepts every proposal") {
  auto r = fpras_likelihood(testing::Dyck(), uniform_hmm("()"), 4, 0.2, AmbiguityBound::constant(1), 5);
  CHECK(r.samples == sample_size(1, 0.2));
  CHECK(r.accepted == r.samples);
  CHECK(r.estimate == 0.125);
}

TEST_CASE("thread count does not change the estimate") {
  auto g = testing::Catalan();
  auto h = uniform_hmm("a");
  auto a = fpras_likelihood(g, h, 4, 0.2, AmbiguityBound::constant(5), 3, 0.25, 1);
  auto b = fpras_likelihood(g, h, 4, 0.2, AmbiguityBound::constant(5), 3, 0.25, 4);
  CHECK(a.accepted == b.accepted);
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("acceptance identities on enumerable instances") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::RandomGrammar(rng, 2 + trial % 3, "ab");
    auto h = random_hmm(1 + trial % 3, "ab", trial);
    const std::size_t length = 2 + trial % 5;
    const double z = weighted_mass(g, h, length).value;
    if (!(z > 0.0)) continue;
    auto dist = exact_distribution(g, h, length);
    double p = 0.0;
    for (const auto& [w, prob] : dist.probability)
      p += prob / derivation_count(g, w).convert_to<double>();
    const double likelihood = brute_force_likelihood(g, h, length);
    CHECK(testing::RelClose(p, likelihood / z, 1e-9));
    CHECK(testing::RelClose(z * p, likelihood, 1e-9));
    const double bound = max_ambiguity(g, length).convert_to<double>();
    CHECK(p >= 1.0 / bound - 1e-12);
  }
}
