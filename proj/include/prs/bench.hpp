// Copyright 2026 The PRS Authors
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

#ifndef PRS_BENCH_HPP_
#define PRS_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "prs/generator.hpp"
#include "prs/pattern_search.hpp"
#include "prs/prs.hpp"

namespace prs {

enum class Algorithm { kPrs, kPatternSearch, kHybridPrsPs, kHybridPsPrs, kGridOracle };

// CLI spellings: prs, ps, hybrid-prs-ps, hybrid-ps-prs, grid.
std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

enum class Outcome { kSoloWin, kTie, kLoss, kNoImprovement };
std::string_view outcome_name(Outcome o);
Outcome parse_outcome(std::string_view name);

// 1 - (F_alg - F_hprr) / (F_best - F_hprr); empty when
// |F_best - F_hprr| <= eps (no method improved on the HPR response).
std::optional<double> compute_gap(double F_alg, double F_hprr, double F_best,
                                  double eps = 1e-5);

struct BenchmarkRecord {
  std::string size;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kPrs;
  double time_cap_s = 0.0;
  // Empty when the algorithm found no upper-feasible point.
  std::optional<double> F_alg;
  double F_hprr = 0.0;
  std::optional<double> gap;
  double runtime_s = 0.0;
  std::size_t iters_or_evals = 0;
  Outcome outcome = Outcome::kNoImprovement;
};

// Fills outcome and gap for records sharing (size, seed, time_cap). The best
// value is taken over the group; a group with no value below F_hprr - eps is
// NoImprovement throughout. Otherwise a record within eps of the best is a
// SoloWin when no other record is, a Tie when another is, and a Loss if it is
// further away.
void classify(std::vector<BenchmarkRecord>& records, double eps = 1e-5);

struct BenchConfig {
  std::vector<SizeSpec> sizes;
  std::size_t n_instances = 100;
  std::vector<Algorithm> algorithms;
  std::vector<double> time_caps;
  std::uint64_t master_seed = 42;
  // 0 = hardware concurrency.
  std::size_t threads = 0;
  PrsConfig prs;
  PatternSearchOptions ps;
  std::size_t grid_resolution = 195;
  double eps = 1e-5;
  BenchConfig();
};

// Seed of instance i of a suite.
std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t i);

// Generates the instances, runs every algorithm under every cap starting from
// the HPR x, classifies the records and returns them sorted by (size order,
// seed, algorithm, cap). GridOracle is skipped for n_x > 3.
std::vector<BenchmarkRecord> run_benchmark(const BenchConfig& config);

// size, seed, algorithm, time_cap_s, F_alg, F_hprr, gap, runtime_s,
// iters_or_evals, outcome
void write_csv(const std::vector<BenchmarkRecord>& records,
               const std::filesystem::path& path);
std::string to_csv(const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> parse_csv(std::string_view text);

// Per size, algorithm and cap: record count, outcome counts, median gap,
// median iterations/evaluations and median runtime.
nlohmann::json summarize(const std::vector<BenchmarkRecord>& records);

}  // namespace prs

#endif  // PRS_BENCH_HPP_
