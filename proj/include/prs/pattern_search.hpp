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

#ifndef PRS_PATTERN_SEARCH_HPP_
#define PRS_PATTERN_SEARCH_HPP_

#include <cstddef>
#include <optional>

#include "prs/model.hpp"
#include "prs/prs.hpp"

namespace prs {

struct PatternSearchOptions {
  // Neighbour evaluations after the one at x0.
  std::size_t max_evals = 5000;
  std::optional<double> time_cap;
  // Initial step as a fraction of each axis' box width.
  double initial_step = 0.1;
  double min_step = 1e-4;
  double feas_tol = 1e-6;
  double follower_rel_gap = 1e-9;
  double lex_eps = 1e-9;
};

struct SearchResult {
  std::optional<BilevelPoint> best;
  std::size_t evaluations = 0;
};

// Compass search on x. Each evaluation solves the follower and scores the
// upper objective (+inf when an upper row is violated). Moves to the best
// improving neighbour x +- step e_i, clamped to the upper box, otherwise
// halves the step. Upper-level binaries are flipped instead of stepped.
// Throws kLowerLevelInfeasible if the follower has no response at x0.
SearchResult pattern_search(const BilevelInstance& inst, std::span<const double> x0,
                            const PatternSearchOptions& opts = {});

enum class HybridOrder { kPrsThenPs, kPsThenPrs };

struct HybridBudgets {
  PrsConfig prs;
  PatternSearchOptions ps;
  // Shared by both stages; each stage's own cap is clipped to what is left.
  std::optional<double> time_cap;
};

struct HybridResult {
  std::optional<BilevelPoint> best;
  std::optional<BilevelPoint> first_stage;
  std::size_t prs_iterations = 0;
  std::size_t ps_evaluations = 0;
};

// Runs the first method from x_start and the second from the first one's best
// x (x_start if it found nothing). The result is the lexicographic minimum of
// the two stages.
HybridResult hybrid(const BilevelInstance& inst, std::span<const double> x_start,
                    HybridOrder order, const HybridBudgets& budgets);

}  // namespace prs

#endif  // PRS_PATTERN_SEARCH_HPP_
