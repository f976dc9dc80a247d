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

// Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
// any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prs/bench.hpp"
#include "prs/errors.hpp"
#include "prs/generator.hpp"
#include "prs/hpr.hpp"
#include "prs/milp.hpp"
#include "prs/oracle.hpp"
#include "prs/pattern_search.hpp"
#include "prs/prs.hpp"
#include "test_util.hpp"

namespace prs {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int g_failures = 0;
std::map<int, std::string> g_lines;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  char head[128];
  std::snprintf(head, sizeof(head), "%s criterion %d: ", ok ? "PASS" : "FAIL", id);
  g_lines[id] = head + name + " (" + detail + ")";
  std::printf("  done %d\n", id);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void golden_trace() {
  const auto t0 = Clock::now();
  const BilevelInstance inst = testing::worked_example();
  const HprResult h = run_hpr(inst);
  const PrsResult r = prs_solve(inst, h.x_hat);
  const double elapsed = seconds_since(t0);
  bool ok = near(h.x_hat[0], -4.85, 1e-9) && near(h.x_hat[1], -4.85, 1e-9) &&
            r.termination == Termination::kRevisitedRegion && r.iterations == 3 &&
            r.best.has_value() && elapsed < 1.0;
  std::string detail = fmt("termination %s, %zu iterations, %.3f s",
                           std::string(termination_name(r.termination)).c_str(),
                           r.iterations, elapsed);
  if (r.best) {
    const BilevelPoint& b = *r.best;
    ok = ok && near(b.x[0], -4.85, 1e-3) && near(b.x[1], 1.5535, 1e-3) &&
         near(b.y[0], 1.0, 1e-3) && near(b.y[1], -1.2063, 1e-3) && near(b.F, 12.0479, 1e-2);
    detail += fmt(", x* = (%.4f, %.4f), y* = (%.4f, %.4f), F* = %.4f", b.x[0], b.x[1], b.y[0],
                  b.y[1], b.F);
  }
  report(1, "golden worked example", ok, detail);
}

bool rows_match(const CriticalRegion& r, const std::vector<std::array<double, 3>>& rows) {
  if (r.E.rows() != rows.size()) return false;
  std::vector<bool> used(rows.size(), false);
  for (const auto& w : rows) {
    bool found = false;
    for (std::size_t i = 0; i < r.E.rows() && !found; ++i) {
      if (!used[i] && near(r.E(i, 0), w[0], 1e-3) && near(r.E(i, 1), w[1], 1e-3) &&
          near(r.f[i], w[2], 1e-3)) {
        used[i] = found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

void golden_regions() {
  const BilevelInstance inst = testing::worked_example();
  const PrsResult r = prs_solve(inst, Vector{-4.85, -4.85});
  bool ok = r.visited_regions.size() >= 2 && r.trace.size() >= 2;
  std::string detail;
  if (ok) {
    const CriticalRegion& c1 = r.visited_regions[0];
    const CriticalRegion& c2 = r.visited_regions[1];
    ok = near(c1.K(0, 0), 0.0, 1e-3) && near(c1.K(0, 1), -1.3220, 1e-3) &&
         near(c1.h[0], 0.5085, 1e-3) &&
         rows_match(c1, {{{0, 1, 1.2437}},
                         {{0.7765, -0.6301, 0.6295}},
                         {{0.9228, 0.3852, 1.1456}},
                         {{-1, 0, 4.85}},
                         {{0, -1, 4.85}}}) &&
         rows_match(c2, {{{0, 1, 1.5535}}, {{0.7765, -0.6301, -0.8068}}, {{-1, 0, 4.85}}});
    const double F2 = r.trace[1].F;
    ok = ok && F2 >= 13.9 && F2 <= 14.1;
    detail = fmt("K1 = (%.4f, %.4f), h1 = %.4f, |E1| = %zu, h2 = %.4f, |E2| = %zu, F2 = %.4f",
                 c1.K(0, 0), c1.K(0, 1), c1.h[0], c1.E.rows(), c2.h[0], c2.E.rows(), F2);
  }
  report(2, "golden critical regions", ok, detail);
}

struct SuiteRun {
  BilevelInstance inst;
  HprResult hpr;
  PrsResult prs;
};

std::vector<SuiteRun> run_suite(const SizeSpec& spec, std::uint64_t base, std::size_t n) {
  std::vector<SuiteRun> out;
  for (std::size_t i = 0; i < n; ++i) {
    SuiteRun s;
    s.inst = generate_instance(spec, instance_seed(base, i)).instance;
    s.hpr = run_hpr(s.inst);
    s.prs = prs_solve(s.inst, s.hpr.x_hat);
    out.push_back(std::move(s));
  }
  return out;
}

void sampled_consistency(const std::vector<SuiteRun>& tiny) {
  std::size_t regions = 0, failed = 0, thin = 0;
  std::size_t min_samples = std::numeric_limits<std::size_t>::max();
  std::size_t as = 0, resp = 0, dual = 0, lpf = 0;
  double max_resp = 0.0, max_dual = 0.0;
  std::uint64_t seed = 0;
  for (const SuiteRun& s : tiny) {
    for (const CriticalRegion& r : s.prs.visited_regions) {
      ++regions;
      RegionSampleOptions o;
      o.samples = 100;
      o.seed = ++seed;
      const RegionSampleReport rep = resample_region(s.inst, r, o);
      min_samples = std::min(min_samples, rep.samples);
      if (rep.samples < 100) ++thin;
      if (!rep.passed() || rep.samples < 100) ++failed;
      as += rep.active_set_mismatches;
      resp += rep.response_mismatches;
      dual += rep.dual_mismatches;
      lpf += rep.lp_failures;
      max_resp = std::max(max_resp, rep.max_response_error);
      max_dual = std::max(max_dual, rep.max_dual_error);
    }
  }
  if (regions == 0) min_samples = 0;
  report(3, "critical-region sampled consistency", failed == 0 && regions > 0,
         fmt("%zu regions, %zu failed, %zu without interior, min samples %zu, mismatches "
             "active %zu response %zu dual %zu lp %zu, max errors %.2e / %.2e",
             regions, failed, thin, min_samples, as, resp, dual, lpf, max_resp, max_dual));
}

struct SuiteStats {
  std::size_t failures = 0;
  std::vector<double> iterations;
  std::size_t improved = 0;
  std::string first_failure;
};

SuiteStats check_suite(const std::vector<SuiteRun>& runs, const std::string& label) {
  SuiteStats st;
  auto fail = [&](std::size_t i, const std::string& why) {
    ++st.failures;
    if (st.first_failure.empty()) st.first_failure = fmt("%s #%zu: ", label.c_str(), i) + why;
  };
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const SuiteRun& s = runs[i];
    st.iterations.push_back(double(s.prs.iterations));
    if (!s.prs.best) {
      fail(i, "no incumbent");
      continue;
    }
    const BilevelPoint& b = *s.prs.best;
    try {
      if (!check_bilevel_feasible(s.inst, b.x, b.y, 1e-6).feasible) fail(i, "infeasible output");
    } catch (const Error& e) {
      fail(i, e.what());
    }
    double pF = std::numeric_limits<double>::infinity(), pf = pF;
    for (const TraceEntry& t : s.prs.trace) {
      if (!t.best_F) continue;
      if (lexicographic_better(pF, pf, *t.best_F, *t.best_f, 1e-9)) fail(i, "incumbent worsened");
      pF = *t.best_F;
      pf = *t.best_f;
    }
    if (s.hpr.F_hprr) {
      if (b.F > *s.hpr.F_hprr + 1e-9) fail(i, "F_best above F_hprr");
      if (b.F < *s.hpr.F_hprr - 1e-5) ++st.improved;
    }
    std::set<std::pair<BinaryVector, std::vector<std::size_t>>> keys;
    for (const CriticalRegion& r : s.prs.visited_regions) {
      if (!keys.insert({r.y_I_fixed, r.active_rows}).second) fail(i, "region key repeated");
    }
  }
  return st;
}

void ledger_properties(const std::vector<SuiteRun>& tiny, const std::vector<SuiteRun>& small,
                       double elapsed) {
  const SuiteStats a = check_suite(tiny, "tiny");
  const SuiteStats b = check_suite(small, "small");
  const std::size_t failures = a.failures + b.failures;
  std::string detail = fmt("%zu tiny + %zu small, %zu failures, %.1f s", tiny.size(),
                           small.size(), failures, elapsed);
  if (failures) {
    detail += "; first: " + (a.first_failure.empty() ? b.first_failure : a.first_failure);
  }
  report(4, "feasibility and monotonicity", failures == 0 && elapsed < 300.0, detail);

  const double mt = median(a.iterations), ms = median(b.iterations);
  report(6, "iteration economy", mt <= 10.0 && ms <= 10.0,
         fmt("median iterations tiny %.1f, small %.1f", mt, ms));

  const double frac = tiny.empty() ? 0.0 : double(a.improved) / double(tiny.size());
  report(7, "improvement frequency", frac >= 0.3 && frac <= 0.7,
         fmt("PRS improves on the HPR response in %zu of %zu tiny instances (%.2f)", a.improved,
             tiny.size(), frac));
}

void oracle_bracketing() {
  SizeSpec spec = size_preset("tiny");
  spec.name = "tiny-nx2";
  spec.n_xC = 2;
  const std::uint64_t base = 2026;
  const std::size_t n = 30;
  std::size_t infeasible = 0, no_grid = 0;
  std::vector<double> deltas;
  for (std::size_t i = 0; i < n; ++i) {
    const BilevelInstance inst = generate_instance(spec, instance_seed(base, i)).instance;
    const HprResult h = run_hpr(inst);
    const PrsResult p = prs_solve(inst, h.x_hat);
    // Step 0.05 over [-4.85, 4.85].
    const GridOracleResult g = grid_oracle(inst, *upper_box(inst), 195);
    const CrossCheckReport c = cross_check_prs(inst, p, g, 0.2);
    if (!c.prs_feasible) ++infeasible;
    if (c.delta_F) {
      deltas.push_back(*c.delta_F);
    } else {
      ++no_grid;
    }
  }
  std::sort(deltas.begin(), deltas.end());
  std::ostringstream dist;
  for (std::size_t i = 0; i < deltas.size(); ++i) dist << (i ? " " : "") << fmt("%.4g", deltas[i]);
  std::printf("  dF (PRS - grid) over %zu instances: %s\n", deltas.size(), dist.str().c_str());

  // Gap formula and exclusion rule on a benchmark over the same instances.
  BenchConfig c;
  c.sizes = {spec};
  c.n_instances = n;
  c.master_seed = base;
  c.algorithms = {Algorithm::kPrs, Algorithm::kPatternSearch, Algorithm::kHybridPrsPs,
                  Algorithm::kHybridPsPrs, Algorithm::kGridOracle};
  c.time_caps = {1000.0};
  c.ps.max_evals = 1000;
  c.threads = 1;
  const std::vector<BenchmarkRecord> recs = run_benchmark(c);
  std::size_t bad_gap = 0, bad_excl = 0, excluded = 0;
  std::map<std::uint64_t, bool> improved;
  for (const BenchmarkRecord& r : recs) {
    if (r.F_alg && *r.F_alg < r.F_hprr - c.eps) improved[r.seed] = true;
    improved.emplace(r.seed, false);
  }
  for (const BenchmarkRecord& r : recs) {
    const bool excl = !r.gap.has_value();
    if (excl) ++excluded;
    if (excl != !improved[r.seed]) ++bad_excl;
    if (!excl && (*r.gap < -1e-12 || *r.gap > 1.0 + 1e-12)) ++bad_gap;
  }
  const bool ok = infeasible == 0 && no_grid == 0 && bad_gap == 0 && bad_excl == 0 &&
                  recs.size() == 5 * n;
  report(5, "oracle bracketing", ok,
         fmt("%zu instances, %zu PRS infeasible, %zu without grid point, dF median %.4g max "
             "%.4g, %zu records, %zu excluded, %zu gap out of range, %zu exclusion errors",
             n, infeasible, no_grid, median(deltas), deltas.empty() ? 0.0 : deltas.back(),
             recs.size(), excluded, bad_gap, bad_excl));
}

void hybrid_dominance() {
  const SizeSpec spec = size_preset("small");
  std::size_t violations = 0, ran = 0;
  std::string first;
  for (std::size_t i = 0; i < 100; ++i) {
    const BilevelInstance inst = generate_instance(spec, instance_seed(4242, i)).instance;
    const HprResult h = run_hpr(inst);
    HybridBudgets b;
    const PrsResult p = prs_solve(inst, h.x_hat, b.prs);
    const SearchResult q = pattern_search(inst, h.x_hat, b.ps);
    const HybridResult a = hybrid(inst, h.x_hat, HybridOrder::kPrsThenPs, b);
    const HybridResult c = hybrid(inst, h.x_hat, HybridOrder::kPsThenPrs, b);
    ++ran;
    auto dominated = [](const std::optional<BilevelPoint>& hy,
                        const std::optional<BilevelPoint>& base) {
      if (!base) return true;
      if (!hy) return false;
      return !lexicographic_better(base->F, base->f, hy->F, hy->f, 0.0);
    };
    if (!dominated(a.best, p.best)) {
      ++violations;
      if (first.empty()) first = fmt("PRS-then-PS at #%zu", i);
    }
    if (!dominated(c.best, q.best)) {
      ++violations;
      if (first.empty()) first = fmt("PS-then-PRS at #%zu", i);
    }
  }
  report(8, "hybrid dominance", violations == 0,
         fmt("%zu small instances, %zu violations%s", ran, violations,
             first.empty() ? "" : (", first " + first).c_str()));
}

void solver_oracles() {
  std::mt19937_64 rng(9001);
  std::size_t lp_count = 0, lp_bad = 0;
  double lp_dev = 0.0;
  for (int t = 0; t < 600; ++t) {
    const std::size_t n = 1 + t % 4;
    const std::size_t rows = 2 * n + std::size_t(t / 4) % (11 - 2 * n);
    const LpProblem lp = testing::random_bounded_lp(rng, n, rows);
    const auto oracle = testing::vertex_enumeration(lp);
    const LpSolution s = solve_lp(lp);
    ++lp_count;
    if (!oracle) {
      if (s.status != LpStatus::kInfeasible) ++lp_bad;
      continue;
    }
    if (s.status != LpStatus::kOptimal) {
      ++lp_bad;
      continue;
    }
    const double d = std::abs(s.objective - *oracle);
    lp_dev = std::max(lp_dev, d);
    if (d > 1e-8) ++lp_bad;
  }
  std::size_t milp_count = 0, milp_bad = 0;
  double milp_dev = 0.0;
  MilpOptions opts;
  opts.rel_gap = 1e-12;
  for (int t = 0; t < 600; ++t) {
    const std::size_t k = 1 + t % 8;
    const std::size_t n = k + t % 3;
    const MilpProblem p = testing::random_milp(rng, n, k, 3);
    const auto oracle = testing::binary_enumeration(p);
    const MilpSolution m = solve_milp(p, opts);
    ++milp_count;
    if (!oracle) {
      if (m.status != MilpStatus::kInfeasible) ++milp_bad;
      continue;
    }
    if (m.status != MilpStatus::kOptimal) {
      ++milp_bad;
      continue;
    }
    const double d = std::abs(m.objective - *oracle);
    milp_dev = std::max(milp_dev, d);
    if (d > 1e-8) ++milp_bad;
  }
  report(9, "solver-stack oracles", lp_bad == 0 && milp_bad == 0,
         fmt("%zu LPs (max dev %.2e, %zu bad), %zu MILPs (max dev %.2e, %zu bad)", lp_count,
             lp_dev, lp_bad, milp_count, milp_dev, milp_bad));
}

std::string without_runtime(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t pos; (pos = line.find(',', start)) != std::string::npos; start = pos + 1) {
      cells.push_back(line.substr(start, pos - start));
    }
    cells.push_back(line.substr(start));
    if (cells.size() > 7) cells.erase(cells.begin() + 7);
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  }
  return out;
}

void determinism() {
  BenchConfig c;
  c.sizes = {size_preset("tiny")};
  c.n_instances = 10;
  c.algorithms = {Algorithm::kPrs, Algorithm::kPatternSearch, Algorithm::kHybridPrsPs,
                  Algorithm::kHybridPsPrs};
  c.time_caps = {30.0, 100.0};
  const std::string a = without_runtime(to_csv(run_benchmark(c)));
  const std::string b = without_runtime(to_csv(run_benchmark(c)));
  const std::size_t lines = std::count(a.begin(), a.end(), '\n');
  report(10, "determinism", a == b && lines == 1 + 10 * 4 * 2,
         fmt("%zu CSV lines, runs %s", lines, a == b ? "identical" : "differ"));
}

}  // namespace
}  // namespace prs

int main() {
  using namespace prs;
  try {
    golden_trace();
    golden_regions();
    const auto t0 = Clock::now();
    const std::vector<SuiteRun> tiny = run_suite(size_preset("tiny"), 42, 100);
    const std::vector<SuiteRun> small = run_suite(size_preset("small"), 42, 100);
    const double elapsed = seconds_since(t0);
    sampled_consistency(tiny);
    ledger_properties(tiny, small, elapsed);
    oracle_bracketing();
    hybrid_dominance();
    solver_oracles();
    determinism();
  } catch (const std::exception& e) {
    for (const auto& [id, line] : g_lines) std::printf("%s\n", line.c_str());
    std::printf("FAIL: unexpected exception: %s\n", e.what());
    return 2;
  }
  for (const auto& [id, line] : g_lines) std::printf("%s\n", line.c_str());
  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
