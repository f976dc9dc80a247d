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

#include "prs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include "prs/errors.hpp"
#include "prs/hpr.hpp"
#include "prs/oracle.hpp"

namespace prs {
namespace {

using Clock = std::chrono::steady_clock;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t next = line.find(sep, pos);
    out.emplace_back(line.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

struct Run {
  std::optional<BilevelPoint> best;
  std::size_t count = 0;
};

Run run_algorithm(const BilevelInstance& inst, std::span<const double> x_hat,
                  Algorithm alg, double cap, const BenchConfig& cfg) {
  Run out;
  switch (alg) {
    case Algorithm::kPrs: {
      PrsConfig c = cfg.prs;
      c.time_limit = cap;
      PrsResult r = prs_solve(inst, x_hat, c);
      out.best = std::move(r.best);
      out.count = r.iterations;
      break;
    }
    case Algorithm::kPatternSearch: {
      PatternSearchOptions o = cfg.ps;
      o.time_cap = cap;
      SearchResult r = pattern_search(inst, x_hat, o);
      out.best = std::move(r.best);
      out.count = r.evaluations + 1;
      break;
    }
    case Algorithm::kHybridPrsPs:
    case Algorithm::kHybridPsPrs: {
      HybridBudgets b{cfg.prs, cfg.ps, cap};
      HybridResult r = hybrid(inst, x_hat,
                              alg == Algorithm::kHybridPrsPs ? HybridOrder::kPrsThenPs
                                                              : HybridOrder::kPsThenPrs,
                              b);
      out.best = std::move(r.best);
      out.count = r.prs_iterations + r.ps_evaluations + 1;
      break;
    }
    case Algorithm::kGridOracle: {
      const auto box = upper_box(inst);
      if (!box) throw Error(ErrorCode::kInvalidArgument, "grid oracle needs a box");
      GridOracleResult g = grid_oracle(inst, *box, cfg.grid_resolution, 1);
      out.best = std::move(g.best);
      out.count = g.evaluated;
      break;
    }
  }
  return out;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kPrs: return "prs";
    case Algorithm::kPatternSearch: return "ps";
    case Algorithm::kHybridPrsPs: return "hybrid-prs-ps";
    case Algorithm::kHybridPsPrs: return "hybrid-ps-prs";
    case Algorithm::kGridOracle: return "grid";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kPrs, Algorithm::kPatternSearch, Algorithm::kHybridPrsPs,
                      Algorithm::kHybridPsPrs, Algorithm::kGridOracle}) {
    if (algorithm_name(a) == name) return a;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown algorithm: " + std::string(name));
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSoloWin: return "SoloWin";
    case Outcome::kTie: return "Tie";
    case Outcome::kLoss: return "Loss";
    case Outcome::kNoImprovement: return "NoImprovement";
  }
  return "unknown";
}

Outcome parse_outcome(std::string_view name) {
  for (Outcome o : {Outcome::kSoloWin, Outcome::kTie, Outcome::kLoss,
                    Outcome::kNoImprovement}) {
    if (outcome_name(o) == name) return o;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown outcome: " + std::string(name));
}

std::optional<double> compute_gap(double F_alg, double F_hprr, double F_best,
                                  double eps) {
  if (std::abs(F_best - F_hprr) <= eps) return std::nullopt;
  return 1.0 - (F_alg - F_hprr) / (F_best - F_hprr);
}

void classify(std::vector<BenchmarkRecord>& records, double eps) {
  auto key = [](const BenchmarkRecord& r) {
    return std::tie(r.size, r.seed, r.time_cap_s);
  };
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return key(records[a]) < key(records[b]);
  });
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo;
    while (hi < order.size() && key(records[order[hi]]) == key(records[order[lo]])) ++hi;
    const double F_hprr = records[order[lo]].F_hprr;
    double F_best = F_hprr;
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& r = records[order[k]];
      if (r.F_alg) F_best = std::min(F_best, *r.F_alg);
    }
    const bool improved = F_best < F_hprr - eps;
    std::size_t near = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const auto& r = records[order[k]];
      if (r.F_alg && *r.F_alg <= F_best + eps) ++near;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      auto& r = records[order[k]];
      r.gap.reset();
      if (!improved) {
        r.outcome = Outcome::kNoImprovement;
        continue;
      }
      const bool close = r.F_alg && *r.F_alg <= F_best + eps;
      r.outcome = !close ? Outcome::kLoss : near > 1 ? Outcome::kTie : Outcome::kSoloWin;
      r.gap = compute_gap(r.F_alg ? *r.F_alg : F_hprr, F_hprr, F_best, eps);
    }
    lo = hi;
  }
}

BenchConfig::BenchConfig() {
  // Benchmark runs use a looser regional MILP gap.
  prs.rel_gap = 1e-4;
}

std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t i) {
  return master_seed + i;
}

std::vector<BenchmarkRecord> run_benchmark(const BenchConfig& config) {
  struct Task {
    std::size_t size_index;
    std::size_t instance;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    for (std::size_t i = 0; i < config.n_instances; ++i) tasks.push_back({s, i});
  }
  std::vector<std::vector<BenchmarkRecord>> slots(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        const SizeSpec& spec = config.sizes[tasks[t].size_index];
        const std::uint64_t seed = instance_seed(config.master_seed, tasks[t].instance);
        const GeneratedInstance gen = generate_instance(spec, seed);
        const HprResult hpr = run_hpr(gen.instance);
        const double F_hprr = hpr.F_hprr.value_or(hpr.F_hpr);
        for (Algorithm alg : config.algorithms) {
          if (alg == Algorithm::kGridOracle && gen.instance.n_x() > 3) continue;
          for (double cap : config.time_caps) {
            const auto t0 = Clock::now();
            Run run = run_algorithm(gen.instance, hpr.x_hat, alg, cap, config);
            BenchmarkRecord rec;
            rec.size = spec.name;
            rec.seed = seed;
            rec.algorithm = alg;
            rec.time_cap_s = cap;
            if (run.best) rec.F_alg = run.best->F;
            rec.F_hprr = F_hprr;
            rec.runtime_s = std::chrono::duration<double>(Clock::now() - t0).count();
            rec.iters_or_evals = run.count;
            slots[t].push_back(std::move(rec));
          }
        }
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
  };
  std::size_t n_threads = config.threads ? config.threads
                                         : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::max<std::size_t>(1, std::min(n_threads, tasks.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw Error(ErrorCode::kNumericalFailure, "benchmark task failed: " + e);
  }

  std::vector<BenchmarkRecord> records;
  for (auto& s : slots) {
    for (auto& r : s) records.push_back(std::move(r));
  }
  classify(records, config.eps);

  std::map<std::string, std::size_t> size_rank;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    size_rank.emplace(config.sizes[s].name, s);
  }
  std::sort(records.begin(), records.end(),
            [&](const BenchmarkRecord& a, const BenchmarkRecord& b) {
              return std::make_tuple(size_rank[a.size], a.seed, a.algorithm, a.time_cap_s) <
                     std::make_tuple(size_rank[b.size], b.seed, b.algorithm, b.time_cap_s);
            });
  return records;
}

std::string to_csv(const std::vector<BenchmarkRecord>& records) {
  std::ostringstream out;
  out << "size,seed,algorithm,time_cap_s,F_alg,F_hprr,gap,runtime_s,iters_or_evals,"
         "outcome\n";
  for (const auto& r : records) {
    out << r.size << ',' << r.seed << ',' << algorithm_name(r.algorithm) << ','
        << format_double(r.time_cap_s) << ',' << (r.F_alg ? format_double(*r.F_alg) : "")
        << ',' << format_double(r.F_hprr) << ',' << (r.gap ? format_double(*r.gap) : "")
        << ',' << format_double(r.runtime_s) << ',' << r.iters_or_evals << ','
        << outcome_name(r.outcome) << '\n';
  }
  return out.str();
}

void write_csv(const std::vector<BenchmarkRecord>& records,
               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << to_csv(records);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

std::vector<BenchmarkRecord> parse_csv(std::string_view text) {
  std::vector<BenchmarkRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 10) {
      throw Error(ErrorCode::kMalformedProblem, "CSV row has wrong field count");
    }
    try {
      BenchmarkRecord r;
      r.size = f[0];
      r.seed = std::stoull(f[1]);
      r.algorithm = parse_algorithm(f[2]);
      r.time_cap_s = parse_number(f[3]);
      if (!f[4].empty()) r.F_alg = parse_number(f[4]);
      r.F_hprr = parse_number(f[5]);
      if (!f[6].empty()) r.gap = parse_number(f[6]);
      r.runtime_s = parse_number(f[7]);
      r.iters_or_evals = std::stoull(f[8]);
      r.outcome = parse_outcome(f[9]);
      out.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kMalformedProblem, "CSV row has a bad field: " + line);
    }
  }
  return out;
}

nlohmann::json summarize(const std::vector<BenchmarkRecord>& records) {
  using Key = std::tuple<std::string, std::string, double>;
  struct Acc {
    std::size_t n = 0;
    std::map<std::string, std::size_t> outcomes;
    std::vector<double> gaps, counts, runtimes;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : records) {
    Acc& a = groups[{r.size, std::string(algorithm_name(r.algorithm)), r.time_cap_s}];
    ++a.n;
    ++a.outcomes[std::string(outcome_name(r.outcome))];
    if (r.gap) a.gaps.push_back(*r.gap);
    a.counts.push_back(static_cast<double>(r.iters_or_evals));
    a.runtimes.push_back(r.runtime_s);
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, a] : groups) {
    nlohmann::json g;
    g["size"] = std::get<0>(key);
    g["algorithm"] = std::get<1>(key);
    g["time_cap_s"] = std::get<2>(key);
    g["records"] = a.n;
    for (Outcome o : {Outcome::kSoloWin, Outcome::kTie, Outcome::kLoss,
                      Outcome::kNoImprovement}) {
      const std::string name(outcome_name(o));
      const auto it = a.outcomes.find(name);
      g["outcomes"][name] = it == a.outcomes.end() ? 0 : it->second;
    }
    g["gap_records"] = a.gaps.size();
    g["median_gap"] = a.gaps.empty() ? nlohmann::json(nullptr) : nlohmann::json(median(a.gaps));
    g["median_iters_or_evals"] = median(a.counts);
    g["median_runtime_s"] = median(a.runtimes);
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace prs
