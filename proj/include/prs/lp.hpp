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

#ifndef PRS_LP_HPP_
#define PRS_LP_HPP_

#include <cstddef>
#include <vector>

#include "prs/linalg.hpp"

namespace prs {

enum class VarKind { kFree, kNonNegative };

// min c^T t  s.t.  A t <= b, with t_j >= 0 for kNonNegative columns.
struct LpProblem {
  Vector c;
  DenseMatrix A;
  Vector b;
  std::vector<VarKind> kinds;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return b.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpTolerances {
  double feas = 1e-7;
  double comp = 1e-7;
  double dual = 1e-7;
  double act = 1e-6;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Vector primal;
  double objective = 0.0;
  // One multiplier per row of A; lambda >= 0 and c + A^T lambda = 0 on free
  // columns at optimality.
  Vector duals;
  // Rows that define the optimal vertex: rows whose slack is nonbasic, plus
  // the bound row of any bounded column sitting nonbasic at its bound.
  // Sorted ascending; at most num_vars() entries.
  std::vector<std::size_t> basis;
  // Rows with |b - A t|_i <= act tolerance. Sorted ascending.
  std::vector<std::size_t> active_set;
  std::size_t pivots = 0;
};

// Dense two-phase primal simplex. Dantzig pricing, falling back to Bland's
// rule after a run of degenerate pivots. Deterministic for a given input.
//
// A free column with a singleton row bounding it from below (a_ij < 0) is
// shifted to that bound, t = lb + u; one bounded only from above is mirrored,
// t = ub - u; any other free column is split, t = u+ - u-. Nonbasic bounded
// columns therefore rest on their bound row, which is how ties in the
// objective are broken.
//
// Throws kMalformedProblem on inconsistent dimensions or non-finite data.
LpSolution solve_lp(const LpProblem& problem, const LpTolerances& tol = {});

// Lexicographic optimum: minimizes c, then each tie objective in turn over
// the optimal face of the previous stage. Status, objective and duals are
// those of the first stage; primal, basis and active_set describe the final
// vertex in terms of the rows of `problem`. A tie objective that is
// unbounded on its face is skipped.
LpSolution solve_lp_lexicographic(const LpProblem& problem,
                                  std::span<const Vector> tie_objectives,
                                  const LpTolerances& tol = {});

struct ActiveSetResult {
  std::vector<std::size_t> rows;
  // Every active row also has lambda_i > act_tol.
  bool strict = true;
};

// Rows with |b_eff - A t|_i <= act_tol at an optimal solution.
ActiveSetResult extract_active_set(const LpSolution& solution,
                                   std::span<const double> b_eff,
                                   const DenseMatrix& A, double act_tol);

// Largest violations of the optimality conditions of an LpSolution; used by
// property tests and debug assertions.
struct KktReport {
  double primal_infeasibility = 0.0;  // max (A t - b)_+
  double dual_infeasibility = 0.0;    // max (-lambda)_+ and stationarity error
  double complementarity = 0.0;       // max |lambda_i (b - A t)_i|
  double duality_gap = 0.0;           // |c^T t + b^T lambda|
};
KktReport check_kkt(const LpProblem& problem, const LpSolution& solution);

void validate_lp(const LpProblem& problem);

}  // namespace prs

#endif  // PRS_LP_HPP_
