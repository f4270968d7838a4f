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

#include "gramhmm/sampling.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

#include "gramhmm/error.hpp"

namespace gramhmm {

namespace {

constexpr double kUnderflowFloor = 1e-300;

// Inverse-CDF draw over weights in their given order with one uniform.
std::size_t Choose(const std::vector<double>& weights, double total, Rng& rng) {
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (target < cumulative) return i;
  }
  return last_positive;
}

class Sampler {
 public:
  Sampler(const CnfGrammar& grammar, const Hmm& hmm, const ForwardTable& table,
          Rng& rng, SampleTrace& trace)
      : grammar_(grammar), hmm_(hmm), table_(table), rng_(rng), trace_(trace) {}

  void Expand(std::size_t index) {
    // Copy: trace_.tree may reallocate below.
    const DerivationNode node = trace_.tree[index];
    const std::size_t n2 = table_.state_count();
    const double entry = table_.at(node.length, node.nonterminal, node.from_state, node.to_state);
    weights_.clear();

    if (node.length == 1) {
      const auto& lexical = grammar_.lexical_rules_of(node.nonterminal);
      double total = 0.0;
      for (auto idx : lexical) {
        const char c = grammar_.lexical_rules()[idx].terminal;
        const double x = hmm_.at(*hmm_.symbol_index(c), node.from_state, node.to_state);
        weights_.push_back(x);
        total += x;
      }
      CheckTotal(total, node);
      const std::size_t pick = Choose(weights_, total, rng_);
      auto& leaf = trace_.tree[index];
      leaf.terminal = grammar_.lexical_rules()[lexical[pick]].terminal;
      leaf.local_mass = total / entry;
      trace_.string[node.begin] = leaf.terminal;
      trace_.weight *= weights_[pick];
      return;
    }

    // Candidates in table accumulation order: split m, rule, middle state u.
    const auto& rules = grammar_.binary_rules_of(node.nonterminal);
    double total = 0.0;
    for (std::size_t m = 1; m < node.length; ++m) {
      for (auto idx : rules) {
        const auto& r = grammar_.binary_rules()[idx];
        const double* left = table_.block(m, r.left).data();
        const double* right = table_.block(node.length - m, r.right).data();
        for (std::size_t u = 0; u < n2; ++u) {
          const double x = left[node.from_state * n2 + u] * right[u * n2 + node.to_state];
          weights_.push_back(x);
          total += x;
        }
      }
    }
    CheckTotal(total, node);
    std::size_t pick = Choose(weights_, total, rng_);
    const std::size_t u = pick % n2;
    pick /= n2;
    const std::size_t rule_pos = pick % rules.size();
    const std::size_t m = pick / rules.size() + 1;
    const auto& r = grammar_.binary_rules()[rules[rule_pos]];

    DerivationNode left_node;
    left_node.nonterminal = r.left;
    left_node.begin = node.begin;
    left_node.length = m;
    left_node.from_state = node.from_state;
    left_node.to_state = u;
    DerivationNode right_node;
    right_node.nonterminal = r.right;
    right_node.begin = node.begin + m;
    right_node.length = node.length - m;
    right_node.from_state = u;
    right_node.to_state = node.to_state;

    {
      auto& self = trace_.tree[index];
      self.rule = rules[rule_pos];
      self.split = m;
      self.mid_state = u;
      self.local_mass = total / entry;
    }
    trace_.tree.push_back(left_node);
    const std::size_t left_index = trace_.tree.size() - 1;
    trace_.tree[index].left = static_cast<std::int64_t>(left_index);
    Expand(left_index);
    trace_.tree.push_back(right_node);
    const std::size_t right_index = trace_.tree.size() - 1;
    trace_.tree[index].right = static_cast<std::int64_t>(right_index);
    Expand(right_index);
  }

 private:
  static void CheckTotal(double total, const DerivationNode& node) {
    if (!(total >= kUnderflowFloor))
      Fail(ErrorKind::kNumerical, "numerical underflow at node (span " +
                                      std::to_string(node.begin) + "+" +
                                      std::to_string(node.length) + ")");
  }

  const CnfGrammar& grammar_;
  const Hmm& hmm_;
  const ForwardTable& table_;
  Rng& rng_;
  SampleTrace& trace_;
  std::vector<double> weights_;
};

void AppendBracketed(const CnfGrammar& grammar, const SampleTrace& trace,
                     std::size_t index, std::string& out) {
  const auto& node = trace.tree[index];
  out += '(';
  out += grammar.name(node.nonterminal);
  out += ' ';
  if (node.left < 0) {
    out += '\'';
    out += node.terminal;
    out += '\'';
  } else {
    AppendBracketed(grammar, trace, static_cast<std::size_t>(node.left), out);
    out += ' ';
    AppendBracketed(grammar, trace, static_cast<std::size_t>(node.right), out);
  }
  out += ')';
}

}  // namespace

std::string SampleTrace::bracketed(const CnfGrammar& grammar) const {
  std::string out;
  if (!tree.empty()) AppendBracketed(grammar, *this, 0, out);
  return out;
}

SampleTrace sample(const CnfGrammar& grammar, const Hmm& hmm, std::size_t length,
                   const ForwardTable& table, Rng& rng) {
  if (length == 0 || length > table.length())
    Fail(ErrorKind::kInvalidArgument, "sample length outside the forward table");
  if (table.nonterminal_count() != grammar.nonterminal_count() ||
      table.state_count() != hmm.state_count())
    Fail(ErrorKind::kValidation, "forward table does not match grammar/HMM dimensions");

  const std::size_t n2 = hmm.state_count();
  const auto root_block = table.block(length, grammar.start());
  const auto pi = hmm.initial();
  std::vector<double> weights(n2 * n2);
  double total = 0.0;
  for (std::size_t s = 0; s < n2; ++s)
    for (std::size_t t = 0; t < n2; ++t)
      total += (weights[s * n2 + t] = pi[s] * root_block[s * n2 + t]);
  if (!(total > 0.0)) Fail(ErrorKind::kValidation, "empty constrained support");

  const std::size_t pick = Choose(weights, total, rng);
  SampleTrace trace;
  trace.string.assign(length, '\0');
  trace.tree.reserve(2 * length - 1);
  DerivationNode root;
  root.nonterminal = grammar.start();
  root.length = length;
  root.from_state = pick / n2;
  root.to_state = pick % n2;
  trace.tree.push_back(root);
  trace.weight = pi[root.from_state];
  Sampler(grammar, hmm, table, rng, trace).Expand(0);
  return trace;
}

void run_streams(std::size_t streams, unsigned threads,
                 const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<unsigned>(std::min<std::size_t>(threads, streams));
  if (workers <= 1) {
    for (std::size_t i = 0; i < streams; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < streams; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<SampleTrace> sample_many(const CnfGrammar& grammar, const Hmm& hmm,
                                     std::size_t length, std::size_t count,
                                     std::uint64_t seed, unsigned threads) {
  if (count == 0) return {};
  const auto table = forward_table(grammar, hmm, length, threads);
  if (!(layer_mass(table, grammar, hmm, length) > 0.0))
    Fail(ErrorKind::kValidation, "empty constrained support");

  std::vector<SampleTrace> out(count);
  const std::size_t streams = (count + kSamplesPerStream - 1) / kSamplesPerStream;
  run_streams(streams, threads, [&](std::size_t stream) {
    Rng rng({seed, stream});
    const std::size_t end = std::min(count, (stream + 1) * kSamplesPerStream);
    for (std::size_t i = stream * kSamplesPerStream; i < end; ++i)
      out[i] = sample(grammar, hmm, length, table, rng);
  });
  return out;
}

}  // namespace gramhmm
