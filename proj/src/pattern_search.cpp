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

#include "prs/pattern_search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "prs/errors.hpp"
#include "prs/oracle.hpp"

namespace prs {
namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Score {
  double F = kInf;
  double f = kInf;
  Vector y;
};

bool better(const std::optional<BilevelPoint>& a, const std::optional<BilevelPoint>& b,
            double eps) {
  if (!a) return false;
  if (!b) return true;
  return lexicographic_better(a->F, a->f, b->F, b->f, eps);
}

}  // namespace

SearchResult pattern_search(const BilevelInstance& inst, std::span<const double> x0,
                            const PatternSearchOptions& opts) {
  require_valid(inst);
  const auto start = Clock::now();
  const std::size_t n = inst.n_x();
  const std::optional<Box> box = upper_box(inst);
  std::vector<bool> is_int(n, false);
  for (std::size_t j : inst.x_integer_indices) is_int[j] = true;

  SearchResult res;
  auto evaluate = [&](const Vector& x) -> Score {
    FollowerResponse r;
    try {
      r = solve_follower(inst, x, opts.follower_rel_gap);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kLowerLevelInfeasible ||
          e.code() == ErrorCode::kUnboundedLowerLevel) {
        return {};
      }
      throw;
    }
    if (inst.upper_violation(x, r.y) > opts.feas_tol) return {};
    return {inst.upper_objective(x, r.y), r.f, std::move(r.y)};
  };

  Vector x(x0.begin(), x0.end());
  // The starting point must admit a follower response.
  Score cur;
  {
    FollowerResponse r = solve_follower(inst, x, opts.follower_rel_gap);
    if (inst.upper_violation(x, r.y) <= opts.feas_tol) {
      cur = {inst.upper_objective(x, r.y), r.f, r.y};
      res.best = BilevelPoint{x, std::move(r.y), cur.F, cur.f};
    }
  }

  Vector step(n, 1.0);
  if (box) {
    for (std::size_t j = 0; j < n; ++j) {
      step[j] = opts.initial_step * (box->hi[j] - box->lo[j]);
    }
  }
  auto max_step = [&] {
    double m = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!is_int[j]) m = std::max(m, step[j]);
    }
    return m;
  };
  const bool has_continuous = inst.n_xC > 0;

  bool out_of_budget = false;
  while (!out_of_budget) {
    if (has_continuous && max_step() < opts.min_step) break;
    Score best_nb;
    Vector best_x;
    for (std::size_t j = 0; j < n && !out_of_budget; ++j) {
      for (int dir : {+1, -1}) {
        if (is_int[j] && dir < 0) continue;
        if (res.evaluations >= opts.max_evals ||
            (opts.time_cap && seconds_since(start) >= *opts.time_cap)) {
          out_of_budget = true;
          break;
        }
        Vector xn = x;
        if (is_int[j]) {
          xn[j] = 1.0 - std::round(x[j]);
        } else {
          xn[j] += dir * step[j];
          if (box) xn[j] = std::clamp(xn[j], box->lo[j], box->hi[j]);
        }
        if (xn[j] == x[j]) continue;
        ++res.evaluations;
        Score s = evaluate(xn);
        if (std::isfinite(s.F) &&
            (!std::isfinite(best_nb.F) ||
             lexicographic_better(s.F, s.f, best_nb.F, best_nb.f, opts.lex_eps))) {
          best_nb = std::move(s);
          best_x = std::move(xn);
        }
      }
    }
    const bool improves =
        std::isfinite(best_nb.F) &&
        (!std::isfinite(cur.F) ||
         lexicographic_better(best_nb.F, best_nb.f, cur.F, cur.f, opts.lex_eps));
    if (improves) {
      x = std::move(best_x);
      cur = std::move(best_nb);
      res.best = BilevelPoint{x, cur.y, cur.F, cur.f};
    } else {
      if (!has_continuous) break;
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_int[j]) step[j] *= 0.5;
      }
    }
  }
  return res;
}

HybridResult hybrid(const BilevelInstance& inst, std::span<const double> x_start,
                    HybridOrder order, const HybridBudgets& budgets) {
  const auto start = Clock::now();
  auto remaining = [&](std::optional<double> own) -> std::optional<double> {
    if (!budgets.time_cap) return own;
    const double left = std::max(0.0, *budgets.time_cap - seconds_since(start));
    return own ? std::min(*own, left) : left;
  };

  HybridResult out;
  auto run_prs = [&](std::span<const double> x) {
    PrsConfig cfg = budgets.prs;
    cfg.time_limit = remaining(cfg.time_limit);
    PrsResult r = prs_solve(inst, x, cfg);
    out.prs_iterations += r.iterations;
    return r.best;
  };
  auto run_ps = [&](std::span<const double> x) {
    PatternSearchOptions o = budgets.ps;
    o.time_cap = remaining(o.time_cap);
    SearchResult r = pattern_search(inst, x, o);
    out.ps_evaluations += r.evaluations;
    return r.best;
  };

  const double eps = budgets.prs.lex_eps;
  out.first_stage = order == HybridOrder::kPrsThenPs ? run_prs(x_start) : run_ps(x_start);
  Vector x2 = out.first_stage ? out.first_stage->x
                              : Vector(x_start.begin(), x_start.end());
  std::optional<BilevelPoint> second =
      order == HybridOrder::kPrsThenPs ? run_ps(x2) : run_prs(x2);
  out.best = better(second, out.first_stage, eps) ? second : out.first_stage;
  return out;
}

}  // namespace prs
