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
#include <map>
#include <random>
#include <string>

#include "doctest.h"
#include "gramhmm/error.hpp"
#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"
#include "gramhmm/inference.hpp"
#include "gramhmm/oracle.hpp"
#include "gramhmm/rng.hpp"
#include "gramhmm/sampling.hpp"
#include "test_support.hpp"

using namespace gramhmm;

namespace {

std::map<std::string, std::uint64_t> CountStrings(const std::vector<SampleTrace>& draws) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& d : draws) ++counts[d.string];
  return counts;
}

}  // namespace

TEST_CASE("singleton support") {
  auto dyck = testing::Dyck();
  for (const auto& d : sample_many(dyck, uniform_hmm("()"), 2, 50, 3)) {
    CHECK(d.string == "()");
    CHECK(d.bracketed(dyck) == "(S (Lp '(') (Rp ')'))");
  }
}

TEST_CASE("Dyck length four is an even split") {
  auto draws = sample_many(testing::Dyck(), uniform_hmm("()"), 4, 100000, 1);
  auto freq = frequencies(CountStrings(draws));
  REQUIRE(freq.size() == 2);
  CHECK(std::abs(freq["(())"] - 0.5) <= 0.01);
  CHECK(std::abs(freq["()()"] - 0.5) <= 0.01);
}

TEST_CASE("ambiguous derivations are chosen in proportion") {
  auto cat = testing::Catalan();
  auto draws = sample_many(cat, uniform_hmm("a"), 3, 20000, 5);
  std::map<std::string, std::uint64_t> trees;
  for (const auto& d : draws) {
    CHECK(d.string == "aaa");
    ++trees[d.bracketed(cat)];
  }
  REQUIRE(trees.size() == 2);
  for (const auto& [tree, count] : trees) CHECK(std::abs(count / 20000.0 - 0.5) <= 0.02);
}

TEST_CASE("determinism and edge counts") {
  auto dyck = testing::Dyck();
  auto a = sample_many(dyck, uniform_hmm("()"), 4, 10, 42);
  auto b = sample_many(dyck, uniform_hmm("()"), 4, 10, 42);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(a[i].string == b[i].string);
    CHECK(a[i].bracketed(dyck) == b[i].bracketed(dyck));
  }
  CHECK(sample_many(dyck, uniform_hmm("()"), 4, 0, 42).empty());
}

TEST_CASE("thread count does not change the draws") {
  auto g = testing::Universal("abc");
  auto h = random_hmm(3, "abc", 9);
  auto one = sample_many(g, h, 6, 3 * kSamplesPerStream + 17, 77, 1);
  auto four = sample_many(g, h, 6, 3 * kSamplesPerStream + 17, 77, 4);
  REQUIRE(one.size() == four.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].string == four[i].string);
    CHECK(one[i].weight == four[i].weight);
  }
}

TEST_CASE("uniform on the universal language") {
  auto draws = sample_many(testing::Universal("ab"), uniform_hmm("ab"), 3, 200000, 2);
  std::map<std::string, double> uniform;
  for_each_string("ab", 3, [&](const std::string& w) { uniform[w] = 0.125; });
  CHECK(tv_distance(frequencies(CountStrings(draws)), uniform) <= 0.01);
}

TEST_CASE("empty support is an error") {
  try {
    sample_many(testing::Dyck(), uniform_hmm("()"), 3, 1, 0);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kValidation);
    CHECK(std::string(e.what()) == "empty constrained support");
  }
}

TEST_CASE("sampled traces are consistent derivations") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::RandomGrammar(rng, 1 + trial % 4, "ab");
    auto h = random_hmm(1 + trial % 3, "ab", trial);
    const std::size_t length = 2 + trial % 5;
    auto table = forward_table(g, h, length);
    if (!(layer_mass(table, g, h, length) > 0.0)) continue;
    Rng r({static_cast<std::uint64_t>(trial), 0});
    for (int i = 0; i < 200; ++i) {
      auto trace = sample(g, h, length, table, r);
      CHECK(derivation_count(g, trace.string) >= 1);
      CHECK(trace.tree.size() == 2 * length - 1);
      double path = h.initial()[trace.tree[0].from_state];
      for (const auto& node : trace.tree) {
        CHECK(std::abs(node.local_mass - 1.0) <= 1e-9);
        if (node.left < 0) {
          CHECK(node.length == 1);
          CHECK(trace.string[node.begin] == node.terminal);
          path *= h.at(*h.symbol_index(node.terminal), node.from_state, node.to_state);
        } else {
          const auto& l = trace.tree[node.left];
          const auto& rt = trace.tree[node.right];
          const auto& rule = g.binary_rules()[node.rule];
          CHECK(rule.lhs == node.nonterminal);
          CHECK(l.nonterminal == rule.left);
          CHECK(rt.nonterminal == rule.right);
          CHECK(l.length == node.split);
          CHECK(l.length + rt.length == node.length);
          CHECK(l.from_state == node.from_state);
          CHECK(l.to_state == node.mid_state);
          CHECK(rt.from_state == node.mid_state);
          CHECK(rt.to_state == node.to_state);
        }
      }
      CHECK(path == doctest::Approx(trace.weight).epsilon(1e-12));
    }
  }
}

TEST_CASE("tree marginals of an ambiguous grammar") {
  auto g = parse_grammar("start S\nS -> S S\nS -> 'a'\nS -> 'b'");
  auto h = random_hmm(2, "ab", 4);
  const std::size_t length = 4;
  const double z = weighted_mass(g, h, length).value;
  std::map<std::string, double> exact;
  for_each_string("ab", length, [&](const std::string& w) {
    for (const auto& tree : testing::ListTrees(g, g.start(), w))
      exact[tree] = string_likelihood(h, w) / z;
  });
  CHECK(exact.size() == 16 * 5);
  auto draws = sample_many(g, h, length, 200000, 8);
  std::map<std::string, std::uint64_t> counts;
  for (const auto& d : draws) ++counts[d.bracketed(g)];
  CHECK(tv_distance(frequencies(counts), exact) <= 0.02);
}

TEST_CASE("sampler matches the exact distribution on random instances") {
  std::mt19937_64 rng(29);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 4; ++trial) {
    auto g = testing::RandomGrammar(rng, 2 + trial % 3, "ab");
    auto h = random_hmm(1 + trial % 3, "ab", trial);
    const std::size_t length = 3 + trial % 3;
    if (!(weighted_mass(g, h, length).value > 0.0)) continue;
    auto exact = exact_distribution(g, h, length);
    auto draws = sample_many(g, h, length, 100000, trial);
    CHECK(tv_distance(frequencies(CountStrings(draws)), exact) <= 0.015);
    ++checked;
  }
  CHECK(checked == 4);
}
