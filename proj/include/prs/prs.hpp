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

#ifndef PRS_PRS_HPP_
#define PRS_PRS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prs/cregion.hpp"
#include "prs/model.hpp"

namespace prs {

struct PrsConfig {
  std::size_t k_max = 100;
  double memb_tol = 1e-6;
  double act_tol = 1e-6;
  double feas_tol = 1e-6;
  // Gap for the regional MILP.
  double rel_gap = 1e-6;
  // Gap for follower solves. Kept tight so that the returned response passes
  // an absolute follower-optimality check at feas_tol.
  double follower_rel_gap = 1e-9;
  // Wall-clock seconds; checked before each iteration after the first.
  std::optional<double> time_limit;
  double lex_eps = 1e-9;
  bool eliminate_redundant = true;
};

// Throws kInvalidArgument for k_max == 0 or non-positive tolerances.
void validate_config(const PrsConfig& config);

enum class Termination { kRevisitedRegion, kMaxIterations, kTimeLimit, kRegionFailure };

std::string_view termination_name(Termination t);

// (F_curr, f_curr) strictly better than (F_best, f_best) in lexicographic
// order with absolute tolerance eps.
bool lexicographic_better(double F_curr, double f_curr, double F_best,
                          double f_best, double eps);

struct TraceEntry {
  Vector x;
  Vector y;
  double F = 0.0;
  double f = 0.0;
  bool upper_feasible = true;
  // Region built at this iterate, if any.
  std::optional<std::size_t> region_id;
  // Incumbent after this iterate.
  std::optional<double> best_F, best_f;
};

struct PrsResult {
  std::optional<BilevelPoint> best;
  std::size_t iterations = 0;
  std::vector<TraceEntry> trace;
  std::vector<CriticalRegion> visited_regions;
  Termination termination = Termination::kMaxIterations;
  // Set for kRegionFailure.
  std::string failure;
};

// Minimizes the upper objective over the region with y replaced by the
// region's response: upper rows, E x <= f and every lower row, all in x.
// Throws kRegionInfeasible or kRegionUnbounded.
Vector regional_upper_opt(const BilevelInstance& inst, const CriticalRegion& region,
                          double rel_gap = 1e-6);

// Parametric region search from x0. Throws kLowerLevelInfeasible or
// kUnboundedLowerLevel if the follower has no response at x0; later failures
// end the search with kRegionFailure.
PrsResult prs_solve(const BilevelInstance& inst, std::span<const double> x0,
                    const PrsConfig& config = {});

}  // namespace prs

#endif  // PRS_PRS_HPP_
