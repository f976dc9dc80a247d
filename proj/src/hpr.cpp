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

#include "prs/hpr.hpp"

#include "prs/errors.hpp"

namespace prs {

HprRelaxation hpr_relax(const BilevelInstance& inst, double rel_gap) {
  require_valid(inst);
  const std::size_t nx = inst.n_x(), ny = inst.n_y();
  MilpProblem milp;
  LpProblem& lp = milp.base;
  lp.c = inst.c1;
  lp.c.insert(lp.c.end(), inst.d1.begin(), inst.d1.end());
  lp.kinds.assign(nx + ny, VarKind::kFree);
  lp.A = DenseMatrix(inst.m1() + inst.m2(), nx + ny);
  for (std::size_t i = 0; i < inst.m1(); ++i) {
    for (std::size_t j = 0; j < nx; ++j) lp.A(i, j) = inst.A1(i, j);
    for (std::size_t j = 0; j < ny; ++j) lp.A(i, nx + j) = inst.B1(i, j);
  }
  for (std::size_t i = 0; i < inst.m2(); ++i) {
    const std::size_t r = inst.m1() + i;
    for (std::size_t j = 0; j < nx; ++j) lp.A(r, j) = inst.A2(i, j);
    for (std::size_t j = 0; j < ny; ++j) lp.A(r, nx + j) = inst.B2(i, j);
  }
  lp.b = inst.b1;
  lp.b.insert(lp.b.end(), inst.b2.begin(), inst.b2.end());
  for (std::size_t j : inst.x_integer_indices) milp.binary_indices.push_back(j);
  for (std::size_t j : inst.y_integer_indices) milp.binary_indices.push_back(nx + j);
  for (std::size_t j : milp.binary_indices) lp.kinds[j] = VarKind::kNonNegative;

  MilpOptions opts;
  opts.rel_gap = rel_gap;
  const MilpSolution sol = solve_milp(milp, opts);
  if (sol.status == MilpStatus::kInfeasible) {
    throw Error(ErrorCode::kInfeasibleInstance, "high-point relaxation is infeasible");
  }
  if (sol.status == MilpStatus::kUnbounded) {
    throw Error(ErrorCode::kUnboundedInstance, "high-point relaxation is unbounded");
  }
  HprRelaxation out;
  out.x_hat.assign(sol.primal.begin(), sol.primal.begin() + nx);
  out.y_hat.assign(sol.primal.begin() + nx, sol.primal.end());
  out.F_hpr = inst.upper_objective(out.x_hat, out.y_hat);
  return out;
}

HprResponse hpr_response(const BilevelInstance& inst, std::span<const double> x_hat,
                         double rel_gap, double feas_tol) {
  FollowerResponse resp = solve_follower(inst, x_hat, rel_gap);
  HprResponse out;
  out.F = inst.upper_objective(x_hat, resp.y);
  out.f = resp.f;
  out.upper_violation = inst.upper_violation(x_hat, resp.y);
  out.upper_feasible = out.upper_violation <= feas_tol;
  out.y_star = std::move(resp.y);
  return out;
}

HprResult run_hpr(const BilevelInstance& inst, double rel_gap, double feas_tol) {
  HprRelaxation relax = hpr_relax(inst, rel_gap);
  HprResult out;
  out.F_hpr = relax.F_hpr;
  out.x_hat = std::move(relax.x_hat);
  out.y_hat = std::move(relax.y_hat);
  try {
    HprResponse r = hpr_response(inst, out.x_hat, rel_gap, feas_tol);
    out.upper_feasible = r.upper_feasible;
    out.F_hprr = r.F;
    out.y_star = std::move(r.y_star);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kLowerLevelInfeasible &&
        e.code() != ErrorCode::kUnboundedLowerLevel) {
      throw;
    }
  }
  return out;
}

}  // namespace prs
