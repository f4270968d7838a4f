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

// gramhmm command-line driver. Emits one JSON document on stdout per
// invocation; diagnostics and error messages go to stderr.
//
// Exit codes: 0 ok, 2 usage, 3 validation, 4 numerical/consistency.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gramhmm/gramhmm.h"

namespace {

using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;

struct Failure {
  int exit_code;
  std::string message;
};

int ExitCodeFor(gramhmm_status status) {
  switch (status) {
    case GRAMHMM_OK: return 0;
    case GRAMHMM_ERR_INVALID_ARGUMENT: return kExitUsage;
    case GRAMHMM_ERR_PARSE:
    case GRAMHMM_ERR_VALIDATION:
    case GRAMHMM_ERR_GUARD:
    case GRAMHMM_ERR_IO: return kExitValidation;
    case GRAMHMM_ERR_NUMERICAL:
    case GRAMHMM_ERR_INTERNAL: return kExitNumerical;
  }
  return kExitNumerical;
}

void Check(gramhmm_status status) {
  if (status != GRAMHMM_OK) throw Failure{ExitCodeFor(status), gramhmm_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GrammarPtr = std::unique_ptr<gramhmm_grammar, Deleter<gramhmm_grammar, gramhmm_grammar_free>>;
using HmmPtr = std::unique_ptr<gramhmm_hmm, Deleter<gramhmm_hmm, gramhmm_hmm_free>>;
using SamplesPtr = std::unique_ptr<gramhmm_samples, Deleter<gramhmm_samples, gramhmm_samples_free>>;
using DistributionPtr =
    std::unique_ptr<gramhmm_distribution, Deleter<gramhmm_distribution, gramhmm_distribution_free>>;
using FormulaPtr = std::unique_ptr<gramhmm_formula, Deleter<gramhmm_formula, gramhmm_formula_free>>;

GrammarPtr LoadGrammar(const std::string& path) {
  gramhmm_grammar* g = nullptr;
  Check(gramhmm_grammar_load(path.c_str(), &g));
  return GrammarPtr(g);
}

HmmPtr LoadHmm(const std::string& path) {
  gramhmm_hmm* h = nullptr;
  Check(gramhmm_hmm_load(path.c_str(), &h));
  return HmmPtr(h);
}

std::string TakeString(char* s) {
  std::string out(s);
  gramhmm_string_free(s);
  return out;
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Options {
  unsigned threads = 0;
  std::string grammar;
  std::string hmm;
  std::size_t length = 0;
  std::string mode = "weighted";
  bool attest = false;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  bool emit_trees = false;
  double epsilon = 0.0;
  std::uint64_t bound = 0;
  double failure = 0.25;
  std::string what;
  std::string cnf;
  std::string out;
  bool with_count = false;
};

json CmdLikelihood(const Options& o) {
  gramhmm_likelihood_mode mode = GRAMHMM_MODE_WEIGHTED;
  if (o.mode == "ucfg") mode = GRAMHMM_MODE_UCFG;
  if (o.mode == "upto") mode = GRAMHMM_MODE_UPTO;
  if (mode != GRAMHMM_MODE_WEIGHTED && !o.attest)
    throw Failure{kExitUsage, "--mode " + o.mode + " requires --attest-unambiguous"};
  auto g = LoadGrammar(o.grammar);
  auto h = LoadHmm(o.hmm);
  Stopwatch clock;
  double value = 0.0;
  Check(gramhmm_likelihood(g.get(), h.get(), o.length, mode, o.attest ? 1 : 0, o.threads, &value));
  return {{"value", value},
          {"mode", o.mode},
          {"length", o.length},
          {"diagnostics", {{"wall_time_ms", clock.elapsed_ms()}}}};
}

json CmdSample(const Options& o) {
  auto g = LoadGrammar(o.grammar);
  auto h = LoadHmm(o.hmm);
  Stopwatch clock;
  gramhmm_samples* raw = nullptr;
  Check(gramhmm_sample(g.get(), h.get(), o.length, o.count, o.seed, o.threads, &raw));
  SamplesPtr samples(raw);
  json records = json::array();
  for (std::size_t i = 0; i < gramhmm_samples_count(samples.get()); ++i) {
    json record = {{"string", gramhmm_samples_string(samples.get(), i)},
                   {"weight", gramhmm_samples_weight(samples.get(), i)}};
    if (o.emit_trees) record["tree"] = gramhmm_samples_tree(samples.get(), i);
    records.push_back(std::move(record));
  }
  std::cerr << "sample: " << o.count << " draws in " << clock.elapsed_ms() << " ms\n";
  return {{"length", o.length}, {"count", o.count}, {"seed", o.seed}, {"samples", records}};
}

json CmdApprox(const Options& o) {
  auto g = LoadGrammar(o.grammar);
  auto h = LoadHmm(o.hmm);
  Stopwatch clock;
  gramhmm_fpras_report report{};
  Check(gramhmm_fpras(g.get(), h.get(), o.length, o.epsilon, o.bound, o.failure, o.seed,
                      o.threads, &report));
  std::cerr << "approx: " << report.samples << " proposals in " << clock.elapsed_ms() << " ms\n";
  return {{"estimate", report.estimate},
          {"z_weighted", report.z_weighted},
          {"samples", report.samples},
          {"accepted", report.accepted},
          {"epsilon", report.epsilon},
          {"failure", report.failure},
          {"bound_value", report.bound_value},
          {"seed", report.seed},
          {"length", o.length}};
}

json CmdOracle(const Options& o) {
  auto g = LoadGrammar(o.grammar);
  Stopwatch clock;
  json result = {{"what", o.what}, {"length", o.length}};
  if (o.what == "maxambiguity") {
    char* decimal = nullptr;
    Check(gramhmm_grammar_max_ambiguity(g.get(), o.length, &decimal));
    // Counts are unbounded; emit as a JSON number when it fits exactly.
    std::string s = TakeString(decimal);
    if (s.size() <= 18)
      result["value"] = std::stoull(s);
    else
      result["value"] = s;
  } else {
    if (o.hmm.empty()) throw Failure{kExitUsage, "--hmm is required for --what " + o.what};
    auto h = LoadHmm(o.hmm);
    if (o.what == "mass" || o.what == "likelihood") {
      double value = 0.0;
      Check(o.what == "mass" ? gramhmm_oracle_weighted_mass(g.get(), h.get(), o.length, &value)
                             : gramhmm_oracle_likelihood(g.get(), h.get(), o.length, &value));
      result["value"] = value;
    } else {
      gramhmm_distribution* raw = nullptr;
      Check(gramhmm_oracle_distribution(g.get(), h.get(), o.length, &raw));
      DistributionPtr dist(raw);
      json entries = json::object();
      for (std::size_t i = 0; i < gramhmm_distribution_size(dist.get()); ++i)
        entries[gramhmm_distribution_string(dist.get(), i)] =
            gramhmm_distribution_probability(dist.get(), i);
      result["value"] = entries;
      result["z_weighted"] = gramhmm_distribution_z(dist.get());
      result["likelihood"] = gramhmm_distribution_likelihood(dist.get());
    }
  }
  result["diagnostics"] = {{"wall_time_ms", clock.elapsed_ms()}};
  return result;
}

json CmdReduce3Sat(const Options& o) {
  gramhmm_formula* raw = nullptr;
  Check(gramhmm_formula_load(o.cnf.c_str(), &raw));
  FormulaPtr formula(raw);
  gramhmm_grammar* graw = nullptr;
  Check(gramhmm_formula_to_grammar(formula.get(), &graw));
  GrammarPtr grammar(graw);
  char* text = nullptr;
  Check(gramhmm_grammar_format(grammar.get(), &text));
  const std::string grammar_text = TakeString(text);

  json result = {{"variables", gramhmm_formula_variable_count(formula.get())},
                 {"clauses", gramhmm_formula_clause_count(formula.get())},
                 {"grammar_size", gramhmm_grammar_size(grammar.get())}};
  if (!o.out.empty()) {
    std::ofstream file(o.out, std::ios::binary);
    if (!(file << grammar_text)) throw Failure{kExitValidation, "cannot write '" + o.out + "'"};
    result["grammar_path"] = o.out;
  } else {
    result["grammar"] = grammar_text;
  }
  if (o.with_count) {
    std::uint64_t membership = 0;
    std::uint64_t dp = 0;
    std::uint64_t brute = 0;
    int dp_exact = 0;
    Check(gramhmm_formula_model_count(formula.get(), GRAMHMM_COUNT_BRUTEFORCE, o.seed, &membership,
                                      nullptr));
    Check(gramhmm_formula_model_count(formula.get(), GRAMHMM_COUNT_DP, o.seed, &dp, &dp_exact));
    Check(gramhmm_formula_brute_force_count(formula.get(), &brute));
    result["model_count"] = {{"via_likelihood", membership},
                             {"via_likelihood_dp", dp},
                             {"dp_exact", dp_exact != 0},
                             {"brute_force", brute}};
  }
  return result;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-constrained likelihoods and sampling for hidden Markov models"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--threads", o.threads, "Worker threads (0 = all cores)");

  auto* likelihood = app.add_subcommand("likelihood", "Exact likelihood via the forward table");
  likelihood->add_option("--grammar", o.grammar, "Grammar file")->required();
  likelihood->add_option("--hmm", o.hmm, "HMM file")->required();
  likelihood->add_option("--length", o.length, "String length L")->required();
  likelihood->add_option("--mode", o.mode, "weighted | ucfg | upto")
      ->check(CLI::IsMember({"weighted", "ucfg", "upto"}));
  likelihood->add_flag("--attest-unambiguous", o.attest, "Caller attests the grammar is unambiguous");

  auto* sample = app.add_subcommand("sample", "Draw strings from the grammar-constrained HMM");
  sample->add_option("--grammar", o.grammar, "Grammar file")->required();
  sample->add_option("--hmm", o.hmm, "HMM file")->required();
  sample->add_option("--length", o.length, "String length L")->required();
  sample->add_option("--count", o.count, "Number of samples")->required();
  sample->add_option("--seed", o.seed, "RNG seed")->required();
  sample->add_flag("--emit-trees", o.emit_trees, "Include derivation trees");

  auto* approx = app.add_subcommand("approx", "Randomized approximation for ambiguous grammars");
  approx->add_option("--grammar", o.grammar, "Grammar file")->required();
  approx->add_option("--hmm", o.hmm, "HMM file")->required();
  approx->add_option("--length", o.length, "String length L")->required();
  approx->add_option("--epsilon", o.epsilon, "Relative precision in (0,1)")->required();
  approx->add_option("--ambiguity-bound", o.bound, "Upper bound on derivations per string")
      ->required();
  approx->add_option("--seed", o.seed, "RNG seed")->required();
  approx->add_option("--failure-prob", o.failure, "Allowed failure probability");

  auto* oracle = app.add_subcommand("oracle", "Brute-force reference values");
  oracle->add_option("--grammar", o.grammar, "Grammar file")->required();
  oracle->add_option("--hmm", o.hmm, "HMM file");
  oracle->add_option("--length", o.length, "String length L")->required();
  oracle->add_option("--what", o.what, "mass | likelihood | distribution | maxambiguity")
      ->required()
      ->check(CLI::IsMember({"mass", "likelihood", "distribution", "maxambiguity"}));

  auto* reduce = app.add_subcommand("reduce3sat", "Build the clause-union grammar of a 3-CNF");
  reduce->add_option("--cnf", o.cnf, "DIMACS CNF file")->required();
  reduce->add_option("--out", o.out, "Write the grammar here");
  reduce->add_flag("--count", o.with_count, "Count models through the likelihood engine");
  reduce->add_option("--seed", o.seed, "RNG seed for the sampling fallback");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    json result;
    if (chosen == likelihood) result = CmdLikelihood(o);
    else if (chosen == sample) result = CmdSample(o);
    else if (chosen == approx) result = CmdApprox(o);
    else if (chosen == oracle) result = CmdOracle(o);
    else result = CmdReduce3Sat(o);
    json doc = {{"command", command}, {"status", "ok"}};
    doc.update(result);
    std::cout << doc.dump(2) << "\n";
    return 0;
  } catch (const Failure& f) {
    std::cerr << "gramhmm " << command << ": " << f.message << "\n";
    std::cout << json{{"command", command}, {"status", "error"}, {"message", f.message}}.dump(2)
              << "\n";
    return f.exit_code;
  }
}
