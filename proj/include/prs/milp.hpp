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

#ifndef PRS_MILP_HPP_
#define PRS_MILP_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "prs/lp.hpp"

namespace prs {

// LP with designated binary columns. Binary columns carry 0 <= t <= 1
// regardless of their kind in `base`.
struct MilpProblem {
  LpProblem base;
  std::vector<std::size_t> binary_indices;
};

enum class MilpStatus { kOptimal, kInfeasible, kUnbounded };

struct MilpOptions {
  double rel_gap = 1e-4;
  double int_tol = 1e-6;
  // Stop after this many node LPs and return the incumbent with
  // budget_exceeded set.
  std::optional<std::size_t> node_limit;
  LpTolerances lp_tol;
  // Called with the bound of every node taken from the frontier, in order.
  std::function<void(double)> on_node_bound;
};

struct MilpSolution {
  MilpStatus status = MilpStatus::kInfeasible;
  Vector primal;
  double objective = 0.0;
  std::size_t node_count = 0;
  bool budget_exceeded = false;
};

// Best-first branch and bound. Frontier ordered by bound, ties by node
// creation order; branches on the most fractional binary (lowest index on
// ties) and creates the 0-branch first. Incumbents are polished by re-solving
// the LP with every binary fixed to its rounded value.
MilpSolution solve_milp(const MilpProblem& problem, const MilpOptions& opts = {});

void validate_milp(const MilpProblem& problem);

// LP obtained by fixing every binary to values[k] (k indexes binary_indices)
// and removing those columns. `constant` receives the objective contribution
// of the fixed columns.
LpProblem fix_binaries(const MilpProblem& problem,
                       std::span<const double> values, double& constant);

}  // namespace prs

#endif  // PRS_MILP_HPP_
