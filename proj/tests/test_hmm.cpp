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
#include <functional>
#include <string>

#include "doctest.h"
#include "gramhmm/error.hpp"
#include "gramhmm/grammar.hpp"
#include "gramhmm/hmm.hpp"
#include "test_support.hpp"

using namespace gramhmm;

namespace {

const char* kUniform1 =
    R"({"states": 1, "alphabet": ["a", "b"], "initial": [1.0],
        "matrices": {"a": [[0.5]], "b": [[0.5]]}})";

const char* kAlternator =
    R"({"states": 2, "alphabet": ["a", "b"], "initial": [1.0, 0.0],
        "matrices": {"a": [[0.0, 1.0], [0.0, 0.0]], "b": [[0.0, 0.0], [1.0, 0.0]]}})";

bool ThrowsKind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("parse valid models") {
  auto u = parse_hmm(kUniform1);
  CHECK(u.state_count() == 1);
  CHECK(string_likelihood(u, "ab") == 0.25);
  auto alt = parse_hmm(kAlternator);
  CHECK(alt.state_count() == 2);
  CHECK(string_likelihood(alt, "ab") == 1.0);
  CHECK(string_likelihood(alt, "aa") == 0.0);
}

TEST_CASE("validation errors") {
  const char* short_rows =
      R"({"states": 1, "alphabet": ["a", "b"], "initial": [1.0],
          "matrices": {"a": [[0.45]], "b": [[0.45]]}})";
  CHECK(ThrowsKind(ErrorKind::kValidation, [&] { parse_hmm(short_rows); }));
  const char* bad_initial =
      R"({"states": 1, "alphabet": ["a"], "initial": [0.5], "matrices": {"a": [[1.0]]}})";
  CHECK(ThrowsKind(ErrorKind::kValidation, [&] { parse_hmm(bad_initial); }));
  const char* negative =
      R"({"states": 1, "alphabet": ["a", "b"], "initial": [1.0],
          "matrices": {"a": [[1.5]], "b": [[-0.5]]}})";
  CHECK(ThrowsKind(ErrorKind::kValidation, [&] { parse_hmm(negative); }));
  CHECK(ThrowsKind(ErrorKind::kParse, [] { parse_hmm("{not json"); }));
  const char* missing =
      R"({"states": 1, "alphabet": ["a"], "initial": [1.0], "matrices": {}})";
  CHECK_THROWS_AS(parse_hmm(missing), Error);
}

TEST_CASE("format round trip is exact") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto h = random_hmm(3, "abc", seed);
    auto back = parse_hmm(format_hmm(h));
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t t = 0; t < 3; ++t) CHECK(back.at(k, s, t) == h.at(k, s, t));
    for (std::size_t s = 0; s < 3; ++s) CHECK(back.initial()[s] == h.initial()[s]);
  }
}

TEST_CASE("string likelihood matches hidden path enumeration") {
  auto h = random_hmm(2, "ab", 17);
  for_each_string("ab", 4, [&](const std::string& w) {
    CHECK(testing::RelClose(string_likelihood(h, w), testing::PathSumLikelihood(h, w), 1e-10));
  });
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto g = random_hmm(n, "abc", 100 + seed);
      for (std::size_t l = 1; l <= 5; ++l)
        for_each_string("abc", l, [&](const std::string& w) {
          CHECK(std::abs(string_likelihood(g, w) - testing::PathSumLikelihood(g, w)) <= 1e-10);
        });
    }
}

TEST_CASE("split likelihood") {
  auto u = parse_hmm(kUniform1);
  CHECK(split_likelihood(u, "ab", 1) == 0.25);
  auto alt = parse_hmm(kAlternator);
  CHECK(split_likelihood(alt, "abab", 2) == 1.0);
  auto h = random_hmm(3, "ab", 23);
  const std::string w = "abbab";
  const double direct = string_likelihood(h, w);
  for (std::size_t cut = 1; cut < w.size(); ++cut)
    CHECK(testing::RelClose(split_likelihood(h, w, cut), direct, 1e-12));
  CHECK(ThrowsKind(ErrorKind::kInvalidArgument, [&] { split_likelihood(h, w, 0); }));
  CHECK(ThrowsKind(ErrorKind::kInvalidArgument, [&] { split_likelihood(h, w, 5); }));
}

TEST_CASE("uniform models") {
  CHECK(string_likelihood(uniform_hmm("01"), "010") == 0.125);
  CHECK(string_likelihood(uniform_hmm("a"), "aaa") == 1.0);
  CHECK(testing::RelClose(string_likelihood(uniform_hmm("abc"), "ab"), 1.0 / 9.0, 1e-15));
}

TEST_CASE("random models") {
  auto a = random_hmm(2, "ab", 7);
  auto b = random_hmm(2, "ab", 7);
  CHECK(format_hmm(a) == format_hmm(b));
  CHECK(format_hmm(a) != format_hmm(random_hmm(2, "ab", 8)));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto h = random_hmm(1 + seed % 4, "abc", seed);
    const std::size_t n = h.state_count();
    for (std::size_t s = 0; s < n; ++s) {
      double row = 0.0;
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t t = 0; t < n; ++t) row += h.at(k, s, t);
      CHECK(std::abs(row - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("length-restricted likelihood is a distribution") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::string alphabet = std::string("abc").substr(0, 1 + seed % 3);
    auto h = random_hmm(1 + seed % 3, alphabet, seed);
    const std::size_t max_len = alphabet.size() == 3 ? 6 : 8;
    for (std::size_t l = 1; l <= max_len; ++l) {
      double total = 0.0;
      for_each_string(alphabet, l, [&](const std::string& w) { total += string_likelihood(h, w); });
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("unknown symbols are rejected") {
  CHECK(ThrowsKind(ErrorKind::kInvalidArgument, [] { string_likelihood(uniform_hmm("ab"), "ac"); }));
}
