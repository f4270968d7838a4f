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

#include "gramhmm/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "gramhmm/error.hpp"

namespace gramhmm {

namespace {

bool IsValidName(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
    return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> Tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size()) break;
    std::size_t begin = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    tokens.push_back({line.substr(begin, i - begin), begin + 1});
  }
  return tokens;
}

[[noreturn]] void ParseError(std::size_t line, std::size_t column,
                             const std::string& what) {
  std::ostringstream os;
  os << line << ":" << column << ": " << what;
  Fail(ErrorKind::kParse, os.str());
}

}  // namespace

CnfGrammar::CnfGrammar(std::vector<std::string> names, NonterminalId start,
                       std::vector<BinaryRule> binary_rules,
                       std::vector<LexicalRule> lexical_rules)
    : names_(std::move(names)),
      start_(start),
      binary_rules_(std::move(binary_rules)),
      lexical_rules_(std::move(lexical_rules)) {
  const std::size_t n = names_.size();
  if (n == 0) Fail(ErrorKind::kValidation, "grammar has no nonterminals");
  if (start_ >= n) Fail(ErrorKind::kValidation, "start symbol out of range");
  if (size() == 0) Fail(ErrorKind::kValidation, "grammar has no rules");
  {
    std::set<std::string_view> seen;
    for (const auto& name : names_) {
      if (!seen.insert(name).second)
        Fail(ErrorKind::kValidation, "duplicate nonterminal name '" + name + "'");
    }
  }
  binary_by_lhs_.resize(n);
  lexical_by_lhs_.resize(n);

  std::set<std::tuple<NonterminalId, NonterminalId, NonterminalId>> binary_seen;
  for (std::uint32_t i = 0; i < binary_rules_.size(); ++i) {
    const auto& r = binary_rules_[i];
    if (r.lhs >= n || r.left >= n || r.right >= n)
      Fail(ErrorKind::kValidation, "binary rule references an undeclared nonterminal");
    if (!binary_seen.emplace(r.lhs, r.left, r.right).second)
      Fail(ErrorKind::kValidation, "duplicate rule " + names_[r.lhs] + " -> " +
                                       names_[r.left] + " " + names_[r.right]);
    binary_by_lhs_[r.lhs].push_back(i);
  }
  std::set<std::pair<NonterminalId, char>> lexical_seen;
  std::set<char> terminals;
  for (std::uint32_t i = 0; i < lexical_rules_.size(); ++i) {
    const auto& r = lexical_rules_[i];
    if (r.lhs >= n)
      Fail(ErrorKind::kValidation, "lexical rule references an undeclared nonterminal");
    if (std::isspace(static_cast<unsigned char>(r.terminal)) || r.terminal == '\'')
      Fail(ErrorKind::kValidation, "terminal may not be whitespace or a quote");
    if (!lexical_seen.emplace(r.lhs, r.terminal).second)
      Fail(ErrorKind::kValidation, "duplicate rule " + names_[r.lhs] + " -> '" +
                                       std::string(1, r.terminal) + "'");
    lexical_by_lhs_[r.lhs].push_back(i);
    terminals.insert(r.terminal);
  }
  alphabet_.assign(terminals.begin(), terminals.end());
}

CnfGrammar parse_grammar(std::string_view text) {
  std::vector<std::string> names;
  std::unordered_map<std::string, NonterminalId> ids;
  auto intern = [&](std::string_view name) {
    auto [it, inserted] =
        ids.emplace(std::string(name), static_cast<NonterminalId>(names.size()));
    if (inserted) names.emplace_back(name);
    return it->second;
  };

  std::vector<BinaryRule> binary;
  std::vector<LexicalRule> lexical;
  std::set<std::tuple<NonterminalId, NonterminalId, NonterminalId>> binary_seen;
  std::set<std::pair<NonterminalId, char>> lexical_seen;
  bool have_start = false;
  NonterminalId start = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tokens = Tokenize(line);
    if (tokens.empty() || tokens[0].text.front() == '#') continue;

    auto check_name = [&](const Token& t) {
      if (!IsValidName(t.text))
        ParseError(line_no, t.column,
                   "invalid nonterminal name '" + std::string(t.text) + "'");
    };

    if (tokens[0].text == "start" && (tokens.size() < 2 || tokens[1].text != "->")) {
      if (tokens.size() != 2)
        ParseError(line_no, tokens[0].column, "expected 'start <NAME>'");
      if (have_start)
        ParseError(line_no, tokens[0].column, "duplicate start declaration");
      check_name(tokens[1]);
      start = intern(tokens[1].text);
      have_start = true;
      continue;
    }

    if (tokens.size() < 3 || tokens[1].text != "->")
      ParseError(line_no, tokens[0].column, "expected '<A> -> <B> <C>' or '<A> -> 'x''");
    check_name(tokens[0]);

    const Token& first = tokens[2];
    if (first.text.front() == '\'') {
      if (first.text.size() != 3 || first.text.back() != '\'')
        ParseError(line_no, first.column,
                   "terminal must be a single character in single quotes");
      if (tokens.size() != 3)
        ParseError(line_no, tokens[3].column, "not Chomsky form: lexical rule with extra symbols");
      NonterminalId lhs = intern(tokens[0].text);
      char c = first.text[1];
      if (c == '\'')
        ParseError(line_no, first.column + 1, "quote is not a valid terminal");
      if (!lexical_seen.emplace(lhs, c).second)
        ParseError(line_no, tokens[0].column, "duplicate rule");
      lexical.push_back({lhs, c});
      continue;
    }

    if (tokens.size() != 4) {
      std::size_t col = tokens.size() > 4 ? tokens[4].column : tokens[2].column;
      ParseError(line_no, col,
                 "not Chomsky form: right-hand side must be two nonterminals or one terminal");
    }
    for (std::size_t i = 2; i < 4; ++i) {
      if (tokens[i].text.front() == '\'')
        ParseError(line_no, tokens[i].column, "not Chomsky form: terminal in binary rule");
      check_name(tokens[i]);
    }
    NonterminalId lhs = intern(tokens[0].text);
    NonterminalId left = intern(tokens[2].text);
    NonterminalId right = intern(tokens[3].text);
    if (!binary_seen.emplace(lhs, left, right).second)
      ParseError(line_no, tokens[0].column, "duplicate rule");
    binary.push_back({lhs, left, right});
  }

  if (!have_start) Fail(ErrorKind::kParse, "undeclared start symbol: missing 'start <NAME>' line");
  return CnfGrammar(std::move(names), start, std::move(binary), std::move(lexical));
}

std::string format_grammar(const CnfGrammar& grammar) {
  std::ostringstream os;
  os << "start " << grammar.name(grammar.start()) << "\n";
  for (const auto& r : grammar.binary_rules())
    os << grammar.name(r.lhs) << " -> " << grammar.name(r.left) << " "
       << grammar.name(r.right) << "\n";
  for (const auto& r : grammar.lexical_rules())
    os << grammar.name(r.lhs) << " -> '" << r.terminal << "'\n";
  return os.str();
}

bool structurally_equal(const CnfGrammar& a, const CnfGrammar& b) {
  if (a.name(a.start()) != b.name(b.start())) return false;
  auto named = [](const CnfGrammar& g) {
    std::set<std::string> rules;
    for (const auto& r : g.binary_rules())
      rules.insert(g.name(r.lhs) + " " + g.name(r.left) + " " + g.name(r.right));
    for (const auto& r : g.lexical_rules())
      rules.insert(g.name(r.lhs) + " '" + r.terminal);
    return rules;
  };
  return named(a) == named(b);
}

std::vector<DerivationCount> inside_vector(const CnfGrammar& grammar,
                                           std::string_view w) {
  const std::size_t len = w.size();
  if (len == 0) Fail(ErrorKind::kInvalidArgument, "empty string has no derivations in CNF");
  for (char c : w) {
    if (!grammar.has_terminal(c))
      Fail(ErrorKind::kInvalidArgument,
           std::string("symbol '") + c + "' not in alphabet");
  }
  const std::size_t n = grammar.nonterminal_count();
  // chart[(begin * (len + 1) + span) * n + a]
  std::vector<DerivationCount> chart((len * (len + 1)) * n);
  auto cell = [&](std::size_t begin, std::size_t span) {
    return chart.begin() + static_cast<std::ptrdiff_t>((begin * (len + 1) + span) * n);
  };

  for (std::size_t i = 0; i < len; ++i) {
    auto out = cell(i, 1);
    for (const auto& r : grammar.lexical_rules())
      if (r.terminal == w[i]) out[r.lhs] += 1;
  }
  for (std::size_t span = 2; span <= len; ++span) {
    for (std::size_t i = 0; i + span <= len; ++i) {
      auto out = cell(i, span);
      for (std::size_t k = 1; k < span; ++k) {
        auto left = cell(i, k);
        auto right = cell(i + k, span - k);
        for (const auto& r : grammar.binary_rules()) {
          const auto& lc = left[r.left];
          if (lc.is_zero()) continue;
          const auto& rc = right[r.right];
          if (rc.is_zero()) continue;
          out[r.lhs] += lc * rc;
        }
      }
    }
  }
  auto root = cell(0, len);
  return std::vector<DerivationCount>(root, root + static_cast<std::ptrdiff_t>(n));
}

DerivationCount derivation_count(const CnfGrammar& grammar, std::string_view w) {
  return inside_vector(grammar, w)[grammar.start()];
}

DerivationCount derivation_count_or_zero(const CnfGrammar& grammar,
                                         std::string_view w) {
  if (w.empty()) return 0;
  for (char c : w)
    if (!grammar.has_terminal(c)) return 0;
  return derivation_count(grammar, w);
}

CnfGrammar grammar_union(const CnfGrammar& g1, const CnfGrammar& g2) {
  std::set<std::string> used(g1.names().begin(), g1.names().end());
  used.insert(g2.names().begin(), g2.names().end());

  std::string start_name = "S0";
  for (int i = 1; used.count(start_name); ++i) start_name = "S0_" + std::to_string(i);
  used.insert(start_name);

  std::vector<std::string> names{start_name};
  names.insert(names.end(), g1.names().begin(), g1.names().end());
  const NonterminalId offset1 = 1;
  const auto offset2 = static_cast<NonterminalId>(names.size());
  std::set<std::string> taken(names.begin(), names.end());
  for (const auto& name : g2.names()) {
    std::string fresh = name;
    while (taken.count(fresh)) fresh += "_2";
    taken.insert(fresh);
    names.push_back(fresh);
  }

  std::vector<BinaryRule> binary;
  std::vector<LexicalRule> lexical;
  std::set<char> start_terminals;

  auto copy_start_rules = [&](const CnfGrammar& g, NonterminalId offset) {
    for (auto idx : g.binary_rules_of(g.start())) {
      const auto& r = g.binary_rules()[idx];
      binary.push_back({0, r.left + offset, r.right + offset});
    }
    // A CNF grammar derives a length-1 string at most once, so a terminal
    // reachable from both starts collapses into one rule.
    for (auto idx : g.lexical_rules_of(g.start())) {
      char c = g.lexical_rules()[idx].terminal;
      if (start_terminals.insert(c).second) lexical.push_back({0, c});
    }
  };
  copy_start_rules(g1, offset1);
  copy_start_rules(g2, offset2);

  auto copy_rules = [&](const CnfGrammar& g, NonterminalId offset) {
    bool start_used = std::any_of(
        g.binary_rules().begin(), g.binary_rules().end(), [&](const BinaryRule& r) {
          return r.left == g.start() || r.right == g.start();
        });
    for (const auto& r : g.binary_rules()) {
      if (r.lhs == g.start() && !start_used) continue;
      binary.push_back({r.lhs + offset, r.left + offset, r.right + offset});
    }
    for (const auto& r : g.lexical_rules()) {
      if (r.lhs == g.start() && !start_used) continue;
      lexical.push_back({r.lhs + offset, r.terminal});
    }
  };
  copy_rules(g1, offset1);
  copy_rules(g2, offset2);

  return CnfGrammar(std::move(names), 0, std::move(binary), std::move(lexical));
}

std::uint64_t enumeration_guard() {
  constexpr std::uint64_t kDefault = 10'000'000;
  const char* env = std::getenv("GRAMHMM_ORACLE_GUARD");
  if (env == nullptr || *env == '\0') return kDefault;
  std::uint64_t value = 0;
  std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) return kDefault;
  return value;
}

void for_each_string(std::string_view alphabet, std::size_t length,
                     const std::function<void(const std::string&)>& visit) {
  if (alphabet.empty()) return;
  const std::uint64_t guard = enumeration_guard();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < length; ++i) {
    if (total > guard / alphabet.size()) {
      Fail(ErrorKind::kGuard, "enumeration of " + std::to_string(alphabet.size()) +
                                  "^" + std::to_string(length) +
                                  " strings exceeds the guard of " +
                                  std::to_string(guard));
    }
    total *= alphabet.size();
  }

  std::vector<std::size_t> digits(length, 0);
  std::string w(length, alphabet[0]);
  for (;;) {
    visit(w);
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++digits[i] < alphabet.size()) {
        w[i] = alphabet[digits[i]];
        break;
      }
      digits[i] = 0;
      w[i] = alphabet[0];
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

std::vector<std::string> enumerate_language(const CnfGrammar& grammar,
                                            std::size_t length) {
  std::vector<std::string> members;
  if (length == 0) return members;
  for_each_string(grammar.alphabet(), length, [&](const std::string& w) {
    if (!derivation_count(grammar, w).is_zero()) members.push_back(w);
  });
  return members;
}

DerivationCount max_ambiguity(const CnfGrammar& grammar, std::size_t length) {
  DerivationCount best = 0;
  if (length == 0) return best;
  for_each_string(grammar.alphabet(), length, [&](const std::string& w) {
    DerivationCount c = derivation_count(grammar, w);
    if (c > best) best = c;
  });
  return best;
}

}  // namespace gramhmm
