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

#include "gramhmm/hmm.hpp"

#include <cmath>
#include <set>
#include <utility>

#include <json.hpp>

#include "gramhmm/error.hpp"
#include "gramhmm/rng.hpp"

namespace gramhmm {

namespace {

using Matrix = std::vector<double>;

// out = lhs * rhs, all n×n row-major.
Matrix Multiply(const Matrix& lhs, const Matrix& rhs, std::size_t n) {
  Matrix out(n * n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t u = 0; u < n; ++u) {
      const double x = lhs[s * n + u];
      if (x == 0.0) continue;
      for (std::size_t t = 0; t < n; ++t) out[s * n + t] += x * rhs[u * n + t];
    }
  return out;
}

std::size_t RequireSymbol(const Hmm& hmm, char c) {
  auto idx = hmm.symbol_index(c);
  if (!idx)
    Fail(ErrorKind::kInvalidArgument, std::string("unknown symbol '") + c + "'");
  return *idx;
}

Matrix OperatorProduct(const Hmm& hmm, std::string_view w) {
  const std::size_t n = hmm.state_count();
  auto first = hmm.matrix(RequireSymbol(hmm, w.front()));
  Matrix acc(first.begin(), first.end());
  for (std::size_t i = 1; i < w.size(); ++i) {
    auto next = hmm.matrix(RequireSymbol(hmm, w[i]));
    acc = Multiply(acc, Matrix(next.begin(), next.end()), n);
  }
  return acc;
}

}  // namespace

Hmm::Hmm(std::size_t state_count, std::string alphabet, std::vector<double> initial,
         std::vector<std::vector<double>> matrices)
    : state_count_(state_count),
      alphabet_(std::move(alphabet)),
      initial_(std::move(initial)),
      matrices_(std::move(matrices)) {
  const std::size_t n = state_count_;
  if (n == 0) Fail(ErrorKind::kValidation, "HMM needs at least one state");
  if (alphabet_.empty()) Fail(ErrorKind::kValidation, "HMM alphabet is empty");
  if (std::set<char>(alphabet_.begin(), alphabet_.end()).size() != alphabet_.size())
    Fail(ErrorKind::kValidation, "duplicate symbol in HMM alphabet");
  if (initial_.size() != n)
    Fail(ErrorKind::kValidation, "dimension mismatch: initial has " +
                                     std::to_string(initial_.size()) +
                                     " entries, expected " + std::to_string(n));
  if (matrices_.size() != alphabet_.size())
    Fail(ErrorKind::kValidation, "dimension mismatch: one matrix per symbol required");

  double initial_sum = 0.0;
  for (double p : initial_) {
    if (!std::isfinite(p) || p < 0.0)
      Fail(ErrorKind::kValidation, "negative or non-finite initial probability");
    initial_sum += p;
  }
  if (std::abs(initial_sum - 1.0) > kStochasticTolerance)
    Fail(ErrorKind::kValidation, "initial distribution sums to " +
                                     std::to_string(initial_sum) + ", not 1");

  std::vector<double> row_sums(n, 0.0);
  for (std::size_t k = 0; k < matrices_.size(); ++k) {
    const auto& m = matrices_[k];
    if (m.size() != n * n)
      Fail(ErrorKind::kValidation, std::string("dimension mismatch in matrix of '") +
                                       alphabet_[k] + "'");
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t) {
        double x = m[s * n + t];
        if (!std::isfinite(x) || x < 0.0)
          Fail(ErrorKind::kValidation, std::string("negative or non-finite entry in matrix of '") +
                                           alphabet_[k] + "'");
        row_sums[s] += x;
      }
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (std::abs(row_sums[s] - 1.0) > kStochasticTolerance)
      Fail(ErrorKind::kValidation, "stochasticity violated: row " + std::to_string(s) +
                                       " of the summed operators sums to " +
                                       std::to_string(row_sums[s]));
  }
}

std::optional<std::size_t> Hmm::symbol_index(char c) const {
  auto pos = alphabet_.find(c);
  if (pos == std::string::npos) return std::nullopt;
  return pos;
}

Hmm parse_hmm(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kParse, std::string("malformed HMM document: ") + e.what());
  }
  try {
    if (!doc.is_object()) Fail(ErrorKind::kParse, "HMM document must be an object");
    for (const char* key : {"states", "alphabet", "initial", "matrices"})
      if (!doc.contains(key))
        Fail(ErrorKind::kParse, std::string("HMM document lacks field '") + key + "'");

    const auto& states = doc.at("states");
    if (!states.is_number_integer() || states.get<long long>() <= 0)
      Fail(ErrorKind::kValidation, "'states' must be a positive integer");
    const auto n = static_cast<std::size_t>(states.get<long long>());

    std::string alphabet;
    for (const auto& sym : doc.at("alphabet")) {
      auto s = sym.get<std::string>();
      if (s.size() != 1)
        Fail(ErrorKind::kValidation, "alphabet entries must be single characters");
      alphabet.push_back(s[0]);
    }
    auto initial = doc.at("initial").get<std::vector<double>>();

    const auto& mats = doc.at("matrices");
    if (!mats.is_object()) Fail(ErrorKind::kParse, "'matrices' must be an object");
    if (mats.size() != alphabet.size())
      Fail(ErrorKind::kValidation, "dimension mismatch: 'matrices' must have one entry per symbol");
    std::vector<std::vector<double>> matrices;
    for (char c : alphabet) {
      std::string key(1, c);
      if (!mats.contains(key))
        Fail(ErrorKind::kValidation, "missing matrix for symbol '" + key + "'");
      auto rows = mats.at(key).get<std::vector<std::vector<double>>>();
      if (rows.size() != n)
        Fail(ErrorKind::kValidation, "dimension mismatch in matrix of '" + key + "'");
      std::vector<double> flat;
      flat.reserve(n * n);
      for (const auto& row : rows) {
        if (row.size() != n)
          Fail(ErrorKind::kValidation, "dimension mismatch in matrix of '" + key + "'");
        flat.insert(flat.end(), row.begin(), row.end());
      }
      matrices.push_back(std::move(flat));
    }
    return Hmm(n, std::move(alphabet), std::move(initial), std::move(matrices));
  } catch (const json::exception& e) {
    Fail(ErrorKind::kParse, std::string("malformed HMM document: ") + e.what());
  }
}

std::string format_hmm(const Hmm& hmm) {
  using nlohmann::json;
  const std::size_t n = hmm.state_count();
  json doc;
  doc["states"] = n;
  json alphabet = json::array();
  json matrices = json::object();
  for (std::size_t k = 0; k < hmm.alphabet().size(); ++k) {
    std::string key(1, hmm.alphabet()[k]);
    alphabet.push_back(key);
    json rows = json::array();
    for (std::size_t s = 0; s < n; ++s) {
      json row = json::array();
      for (std::size_t t = 0; t < n; ++t) row.push_back(hmm.at(k, s, t));
      rows.push_back(std::move(row));
    }
    matrices[key] = std::move(rows);
  }
  doc["alphabet"] = std::move(alphabet);
  doc["initial"] = std::vector<double>(hmm.initial().begin(), hmm.initial().end());
  doc["matrices"] = std::move(matrices);
  return doc.dump(2) + "\n";
}

double string_likelihood(const Hmm& hmm, std::string_view w) {
  if (w.empty()) Fail(ErrorKind::kInvalidArgument, "likelihood query needs |w| >= 1");
  const std::size_t n = hmm.state_count();
  std::vector<double> v(hmm.initial().begin(), hmm.initial().end());
  std::vector<double> next(n);
  for (char c : w) {
    const std::size_t k = RequireSymbol(hmm, c);
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (v[s] == 0.0) continue;
      for (std::size_t t = 0; t < n; ++t) next[t] += v[s] * hmm.at(k, s, t);
    }
    v.swap(next);
  }
  double total = 0.0;
  for (double x : v) total += x;
  return total;
}

double split_likelihood(const Hmm& hmm, std::string_view w, std::size_t cut) {
  if (cut < 1 || cut >= w.size())
    Fail(ErrorKind::kInvalidArgument, "invalid cut " + std::to_string(cut) +
                                          " for a string of length " +
                                          std::to_string(w.size()));
  const std::size_t n = hmm.state_count();
  const Matrix head = OperatorProduct(hmm, w.substr(0, cut));
  const Matrix tail = OperatorProduct(hmm, w.substr(cut));
  // The order-3 selection tensor pairs (s,u) with (u,t); only its n'^3
  // nonzeros are visited.
  auto pi = hmm.initial();
  double total = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    if (pi[s] == 0.0) continue;
    for (std::size_t u = 0; u < n; ++u) {
      const double x = pi[s] * head[s * n + u];
      if (x == 0.0) continue;
      for (std::size_t t = 0; t < n; ++t) total += x * tail[u * n + t];
    }
  }
  return total;
}

Hmm uniform_hmm(std::string_view alphabet) {
  if (alphabet.empty()) Fail(ErrorKind::kInvalidArgument, "uniform HMM needs a nonempty alphabet");
  const double p = 1.0 / static_cast<double>(alphabet.size());
  std::vector<std::vector<double>> matrices(alphabet.size(), std::vector<double>{p});
  return Hmm(1, std::string(alphabet), {1.0}, std::move(matrices));
}

Hmm random_hmm(std::size_t state_count, std::string_view alphabet,
               std::uint64_t seed) {
  if (state_count == 0) Fail(ErrorKind::kInvalidArgument, "state_count must be >= 1");
  if (alphabet.empty()) Fail(ErrorKind::kInvalidArgument, "random HMM needs a nonempty alphabet");
  Rng rng({seed, 0});
  auto draw = [&] { return -std::log1p(-rng.uniform()); };

  const std::size_t n = state_count;
  std::vector<double> initial(n);
  double total = 0.0;
  for (auto& p : initial) total += (p = draw());
  for (auto& p : initial) p /= total;

  std::vector<std::vector<double>> matrices(alphabet.size(), std::vector<double>(n * n));
  for (std::size_t s = 0; s < n; ++s) {
    double row = 0.0;
    for (auto& m : matrices)
      for (std::size_t t = 0; t < n; ++t) row += (m[s * n + t] = draw());
    for (auto& m : matrices)
      for (std::size_t t = 0; t < n; ++t) m[s * n + t] /= row;
  }
  return Hmm(n, std::string(alphabet), std::move(initial), std::move(matrices));
}

}  // namespace gramhmm
