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

#include "prs/prs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <utility>

#include "prs/errors.hpp"
#include "prs/milp.hpp"

namespace prs {

void validate_config(const PrsConfig& config) {
  if (config.k_max == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k_max must be at least 1");
  }
  for (double t : {config.memb_tol, config.act_tol, config.feas_tol,
                   config.rel_gap, config.follower_rel_gap, config.lex_eps}) {
    if (!(t > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "tolerances must be positive");
    }
  }
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::kRevisitedRegion: return "RevisitedRegion";
    case Termination::kMaxIterations: return "MaxIterations";
    case Termination::kTimeLimit: return "TimeLimit";
    case Termination::kRegionFailure: return "RegionFailure";
  }
  return "Unknown";
}

bool lexicographic_better(double F_curr, double f_curr, double F_best,
                          double f_best, double eps) {
  if (F_curr < F_best - eps) return true;
  return std::abs(F_curr - F_best) <= eps && f_curr < f_best - eps;
}

Vector regional_upper_opt(const BilevelInstance& inst, const CriticalRegion& region,
                          double rel_gap) {
  const std::size_t nx = inst.n_x();
  const auto yc = inst.y_continuous_indices();
  const auto& yi = inst.y_integer_indices;

  MilpProblem milp;
  LpProblem& lp = milp.base;
  lp.A = DenseMatrix(0, nx);
  lp.kinds.assign(nx, VarKind::kFree);
  for (std::size_t j : inst.x_integer_indices) {
    lp.kinds[j] = VarKind::kNonNegative;
    milp.binary_indices.push_back(j);
  }

  // c1 + K^T d1C
  lp.c = inst.c1;
  for (std::size_t k = 0; k < yc.size(); ++k) {
    const double w = inst.d1[yc[k]];
    for (std::size_t j = 0; j < nx; ++j) lp.c[j] += w * region.K(k, j);
  }

  auto add_row = [&](std::span<const double> a, std::span<const double> b,
                     double rhs) {
    Vector coef(a.begin(), a.end());
    for (std::size_t k = 0; k < yc.size(); ++k) {
      const double bk = b[yc[k]];
      if (bk == 0.0) continue;
      for (std::size_t j = 0; j < nx; ++j) coef[j] += bk * region.K(k, j);
      rhs -= bk * region.h[k];
    }
    for (std::size_t q = 0; q < yi.size(); ++q) rhs -= b[yi[q]] * region.y_I_fixed[q];
    if (norm2(coef) < 1e-10) {
      // Active lower rows collapse to 0 <= ~0.
      if (rhs < -1e-6) {
        throw Error(ErrorCode::kRegionInfeasible,
                    "substituted constant row is violated");
      }
      return;
    }
    lp.A.append_row(coef);
    lp.b.push_back(rhs);
  };
  for (std::size_t i = 0; i < inst.m1(); ++i) {
    add_row(inst.A1.row(i), inst.B1.row(i), inst.b1[i]);
  }
  for (std::size_t r = 0; r < region.E.rows(); ++r) {
    lp.A.append_row(region.E.row(r));
    lp.b.push_back(region.f[r]);
  }
  for (std::size_t i = 0; i < inst.m2(); ++i) {
    add_row(inst.A2.row(i), inst.B2.row(i), inst.b2[i]);
  }

  MilpOptions opts;
  opts.rel_gap = rel_gap;
  const MilpSolution sol = solve_milp(milp, opts);
  if (sol.status == MilpStatus::kInfeasible) {
    throw Error(ErrorCode::kRegionInfeasible, "regional upper problem is infeasible");
  }
  if (sol.status == MilpStatus::kUnbounded) {
    throw Error(ErrorCode::kRegionUnbounded, "regional upper problem is unbounded");
  }
  return sol.primal;
}

PrsResult prs_solve(const BilevelInstance& inst, std::span<const double> x0,
                    const PrsConfig& config) {
  require_valid(inst);
  validate_config(config);
  if (x0.size() != inst.n_x()) {
    throw Error(ErrorCode::kInvalidArgument, "x0 has the wrong length");
  }
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();

  RegionOptions ropts;
  ropts.act_tol = config.act_tol;
  ropts.memb_tol = config.memb_tol;
  ropts.eliminate_redundant = config.eliminate_redundant;

  PrsResult res;
  std::set<std::pair<BinaryVector, std::vector<std::size_t>>> seen;
  Vector x(x0.begin(), x0.end());

  for (;;) {
    if (res.iterations > 0 && config.time_limit) {
      const std::chrono::duration<double> el = Clock::now() - start;
      if (el.count() >= *config.time_limit) {
        res.termination = Termination::kTimeLimit;
        break;
      }
    }

    FollowerResponse resp;
    if (res.iterations == 0) {
      resp = solve_follower(inst, x, config.follower_rel_gap);
    } else {
      try {
        resp = solve_follower(inst, x, config.follower_rel_gap);
      } catch (const Error& e) {
        res.termination = Termination::kRegionFailure;
        res.failure = e.what();
        break;
      }
    }
    ++res.iterations;

    TraceEntry entry;
    entry.x = x;
    entry.y = resp.y;
    entry.F = inst.upper_objective(x, resp.y);
    entry.f = resp.f;
    entry.upper_feasible = inst.upper_violation(x, resp.y) <= config.feas_tol;
    if (entry.upper_feasible &&
        (!res.best || lexicographic_better(entry.F, entry.f, res.best->F,
                                           res.best->f, config.lex_eps))) {
      res.best = BilevelPoint{x, resp.y, entry.F, entry.f};
    }
    if (res.best) {
      entry.best_F = res.best->F;
      entry.best_f = res.best->f;
    }
    res.trace.push_back(std::move(entry));

    const BinaryVector y_I = binary_part(inst, resp.y);
    const bool revisited =
        std::any_of(res.visited_regions.begin(), res.visited_regions.end(),
                    [&](const CriticalRegion& r) {
                      return contains(r, x, y_I, config.memb_tol);
                    });
    if (revisited) {
      res.termination = Termination::kRevisitedRegion;
      break;
    }
    if (res.iterations >= config.k_max) {
      res.termination = Termination::kMaxIterations;
      break;
    }

    try {
      const ActiveSetInfo info = identify_active_set(inst, y_I, x, ropts);
      if (!seen.emplace(y_I, info.active_rows).second) {
        res.termination = Termination::kRevisitedRegion;
        break;
      }
      CriticalRegion region =
          build_critical_region(inst, info, affine_response(inst, info), x, ropts);
      region.id = res.visited_regions.size();
      res.trace.back().region_id = region.id;
      res.visited_regions.push_back(std::move(region));
      x = regional_upper_opt(inst, res.visited_regions.back(), config.rel_gap);
    } catch (const Error& e) {
      res.termination = Termination::kRegionFailure;
      res.failure = e.what();
      break;
    }
  }
  return res;
}

}  // namespace prs
