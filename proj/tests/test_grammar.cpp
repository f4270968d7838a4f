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

#include <algorithm>
#include <functional>
#include <random>
#include <string>

#include "doctest.h"
#include "gramhmm/error.hpp"
#include "gramhmm/grammar.hpp"
#include "test_support.hpp"

using namespace gramhmm;
using gramhmm::testing::TreeEnumerator;

namespace {

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kIo;
}

std::string ErrorText(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse minimal grammars") {
  auto g = parse_grammar("start S\nS -> 'a'");
  CHECK(g.nonterminal_count() == 1);
  CHECK(g.lexical_rules().size() == 1);
  CHECK(g.binary_rules().empty());

  auto h = parse_grammar("start S\nS -> A B\nA -> 'a'\nB -> 'b'");
  CHECK(h.nonterminal_count() == 3);
  CHECK(h.binary_rules().size() == 1);
  CHECK(h.lexical_rules().size() == 2);
  CHECK(h.name(h.start()) == "S");
  CHECK(h.alphabet() == "ab");
}

TEST_CASE("parse rejects malformed input") {
  auto three = [] { parse_grammar("start S\nS -> A B C\nA -> 'a'\nB -> 'b'\nC -> 'c'"); };
  CHECK(KindOf(three) == ErrorKind::kParse);
  CHECK(ErrorText(three).find("not Chomsky form") != std::string::npos);
  CHECK(ErrorText(three).find("2:") == 0);

  CHECK(ErrorText([] { parse_grammar("S -> 'a'"); }).find("undeclared start symbol") !=
        std::string::npos);
  CHECK(KindOf([] { parse_grammar("start S\nS -> 'ab'"); }) == ErrorKind::kParse);
  CHECK(ErrorText([] { parse_grammar("start S\nS -> 'a'\nS -> 'a'"); }).find("3:1: duplicate rule") == 0);
  CHECK(KindOf([] { parse_grammar("start S\nS => 'a'"); }) == ErrorKind::kParse);
  CHECK(KindOf([] { parse_grammar("start 9S\nS -> 'a'"); }) == ErrorKind::kParse);
}

TEST_CASE("comments and blank lines are ignored") {
  auto g = parse_grammar("# header\n\nstart S\n# rules\n  S -> 'a'  \n\n");
  CHECK(g.size() == 1);
}

TEST_CASE("format round trip") {
  for (const char* text : {testing::kDyck, testing::kCatalan}) {
    auto g = parse_grammar(text);
    auto back = parse_grammar(format_grammar(g));
    CHECK(structurally_equal(g, back));
    CHECK(format_grammar(back) == format_grammar(g));
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto g = testing::RandomGrammar(rng, 1 + i % 4, "abc");
    CHECK(structurally_equal(g, parse_grammar(format_grammar(g))));
    auto u = grammar_union(g, testing::Dyck());
    CHECK(structurally_equal(u, parse_grammar(format_grammar(u))));
  }
}

TEST_CASE("inside vector") {
  auto cat = testing::Catalan();
  auto v = inside_vector(cat, "aaaa");
  CHECK(v[cat.start()] == 5);

  auto one = parse_grammar("start S\nS -> 'a'");
  CHECK(inside_vector(one, "a")[0] == 1);
  CHECK(KindOf([&] { inside_vector(one, "b"); }) == ErrorKind::kInvalidArgument);
  CHECK(ErrorText([&] { inside_vector(one, "b"); }).find("not in alphabet") != std::string::npos);
  CHECK(KindOf([&] { inside_vector(one, ""); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("derivation count examples") {
  auto cat = testing::Catalan();
  CHECK(derivation_count(cat, "aaa") == 2);
  auto one = parse_grammar("start S\nS -> 'a'");
  CHECK(derivation_count(one, "aa") == 0);
  CHECK(derivation_count(testing::Dyck(), "()()") == 1);
  CHECK(derivation_count_or_zero(one, "b") == 0);
}

TEST_CASE("counts exceed 64 bits without wrapping") {
  auto cat = testing::Catalan();
  // Catalan(40) = 2622127042276492108820
  DerivationCount expected("2622127042276492108820");
  CHECK(derivation_count(cat, std::string(41, 'a')) == expected);
}

TEST_CASE("derivation count matches tree enumeration on random grammars") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::string alphabet = std::string("abc").substr(0, 1 + trial % 3);
    auto g = testing::RandomGrammar(rng, 1 + trial % 4, alphabet);
    const std::size_t max_len = alphabet.size() == 3 ? 5 : 7;
    TreeEnumerator trees(g, max_len);
    for (std::size_t l = 1; l <= max_len; ++l)
      for_each_string(alphabet, l, [&](const std::string& w) {
        CHECK(derivation_count_or_zero(g, w) == trees.count(w));
      });
  }
}

TEST_CASE("explicit tree listing agrees on small inputs") {
  auto dyck = testing::Dyck();
  for (std::size_t l = 1; l <= 6; ++l)
    for_each_string("()", l, [&](const std::string& w) {
      CHECK(derivation_count(dyck, w) == testing::ListTrees(dyck, dyck.start(), w).size());
    });
}

TEST_CASE("union examples") {
  auto a = parse_grammar("start S\nS -> 'a'");
  auto b = parse_grammar("start S\nS -> 'b'");
  auto ab = grammar_union(a, b);
  CHECK(enumerate_language(ab, 1) == std::vector<std::string>{"a", "b"});
  CHECK(derivation_count(ab, "a") == 1);
  CHECK(derivation_count(ab, "b") == 1);

  auto dyck = testing::Dyck();
  auto all = parse_grammar(
      "start S\nS -> L S\nS -> R S\nS -> '('\nS -> ')'\nL -> '('\nR -> ')'");
  auto u = grammar_union(dyck, all);
  CHECK(derivation_count(u, "()()") == 2);
  CHECK(derivation_count(u, "))((") == 1);
}

TEST_CASE("union doubles counts of strings longer than one symbol") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::RandomGrammar(rng, 1 + trial % 3, "ab");
    auto gg = grammar_union(g, g);
    for (std::size_t l = 2; l <= 6; ++l)
      for_each_string("ab", l, [&](const std::string& w) {
        CHECK(derivation_count_or_zero(gg, w) == 2 * derivation_count_or_zero(g, w));
      });
    // Chomsky form derives a single symbol at most once from the start.
    for_each_string("ab", 1, [&](const std::string& w) {
      CHECK(derivation_count_or_zero(gg, w) == derivation_count_or_zero(g, w));
    });
  }
}

TEST_CASE("union is additive on random pairs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto g1 = testing::RandomGrammar(rng, 1 + trial % 3, "ab");
    auto g2 = testing::RandomGrammar(rng, 1 + (trial / 3) % 3, "ab");
    auto u = grammar_union(g1, g2);
    for (std::size_t l = 2; l <= 6; ++l)
      for_each_string("ab", l, [&](const std::string& w) {
        CHECK(derivation_count_or_zero(u, w) ==
              derivation_count_or_zero(g1, w) + derivation_count_or_zero(g2, w));
      });
    for_each_string("ab", 1, [&](const std::string& w) {
      const bool member = derivation_count_or_zero(g1, w) + derivation_count_or_zero(g2, w) > 0;
      CHECK(derivation_count_or_zero(u, w) == (member ? 1 : 0));
    });
  }
}

TEST_CASE("adding a rule never decreases inside counts") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = testing::RandomGrammar(rng, 3, "ab", 0.15);
    auto binary = g.binary_rules();
    auto lexical = g.lexical_rules();
    std::uniform_int_distribution<NonterminalId> pick(0, 2);
    BinaryRule extra{pick(rng), pick(rng), pick(rng)};
    if (std::find(binary.begin(), binary.end(), extra) != binary.end()) continue;
    binary.push_back(extra);
    CnfGrammar bigger(g.names(), g.start(), binary, lexical);
    for (std::size_t l = 1; l <= 5; ++l)
      for_each_string(g.alphabet(), l, [&](const std::string& w) {
        auto before = inside_vector(g, w);
        auto after = inside_vector(bigger, w);
        for (std::size_t a = 0; a < before.size(); ++a) CHECK(after[a] >= before[a]);
      });
  }
}

TEST_CASE("enumerate language") {
  auto dyck = testing::Dyck();
  CHECK(enumerate_language(dyck, 4) == std::vector<std::string>{"(())", "()()"});
  CHECK(enumerate_language(dyck, 3).empty());
  auto all = testing::Universal("ab");
  CHECK(enumerate_language(all, 2) == std::vector<std::string>{"aa", "ab", "ba", "bb"});

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::RandomGrammar(rng, 2 + trial % 2, "ab");
    for (std::size_t l = 1; l <= 5; ++l) {
      auto members = enumerate_language(g, l);
      for_each_string("ab", l, [&](const std::string& w) {
        const bool listed = std::binary_search(members.begin(), members.end(), w);
        CHECK(listed == (derivation_count_or_zero(g, w) >= 1));
      });
    }
  }
}

TEST_CASE("max ambiguity") {
  CHECK(max_ambiguity(testing::Catalan(), 4) == 5);
  CHECK(max_ambiguity(testing::Dyck(), 6) == 1);
  CHECK(max_ambiguity(parse_grammar("start S\nS -> 'a'"), 1) == 1);
}

TEST_CASE("enumeration guard") {
  CHECK(enumeration_guard() >= 1);
  auto g = testing::Universal("abc");
  CHECK(KindOf([&] { enumerate_language(g, 40); }) == ErrorKind::kGuard);
}
