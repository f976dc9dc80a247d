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

#ifndef PRS_ORACLE_HPP_
#define PRS_ORACLE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "prs/cregion.hpp"
#include "prs/model.hpp"
#include "prs/prs.hpp"

namespace prs {

struct Box {
  Vector lo, hi;
  std::size_t dim() const { return lo.size(); }
};

// Same interval on every axis.
Box uniform_box(std::size_t n, double lo, double hi);

// Per-variable bounds read off upper rows that touch a single x column and no
// y column. Empty if some variable lacks a finite lower or upper bound.
std::optional<Box> upper_box(const BilevelInstance& inst);

struct GridOracleResult {
  std::optional<BilevelPoint> best;
  std::size_t resolution = 0;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
  Box box;
};

// Evaluates the follower response on a resolution^n_x grid over the box and
// keeps the best upper-feasible point, ordered by (F, f, grid index). A
// resolution of 1 uses the box center. Work is split over `threads` workers
// (0 = hardware concurrency); the answer does not depend on the split.
// Throws kDimensionTooLarge when n_x > 3.
GridOracleResult grid_oracle(const BilevelInstance& inst, const Box& box,
                             std::size_t resolution, std::size_t threads = 0,
                             double feas_tol = 1e-6);

struct RegionAtlas {
  BinaryVector y_I_fixed;
  std::vector<CriticalRegion> regions;
  std::size_t coverage_samples = 0;
  std::size_t infeasible_samples = 0;
  std::vector<Vector> uncovered;
};

// Samples the box uniformly and builds a region at every feasible sample not
// already covered. Regions are keyed by active_rows; a sample whose region
// duplicates a known key, or whose construction fails, goes to `uncovered`.
RegionAtlas enumerate_regions(const BilevelInstance& inst,
                              const BinaryVector& y_I_fixed, const Box& box,
                              std::size_t sample_budget = 2000,
                              std::uint64_t seed = 0,
                              const RegionOptions& opts = {});

struct RegionSampleOptions {
  std::size_t samples = 100;
  // Samples are drawn from E x <= f - margin.
  double margin = 1e-6;
  double response_tol = 1e-6;
  double dual_tol = 1e-6;
  std::uint64_t seed = 0;
};

struct RegionSampleReport {
  std::size_t samples = 0;
  std::size_t active_set_mismatches = 0;
  std::size_t response_mismatches = 0;
  std::size_t dual_mismatches = 0;
  std::size_t lp_failures = 0;
  double max_response_error = 0.0;
  double max_dual_error = 0.0;
  // Radius of the largest ball inside E x <= f - margin. Zero means the
  // shrunken region is empty and no samples were drawn.
  double inner_radius = 0.0;
  bool passed() const {
    return active_set_mismatches == 0 && response_mismatches == 0 &&
           dual_mismatches == 0 && lp_failures == 0;
  }
};

// Hit-and-run samples inside the region; at each sample the fixed-binary
// follower LP is re-solved and compared with the region's active set,
// affine response and multipliers.
RegionSampleReport resample_region(const BilevelInstance& inst,
                                   const CriticalRegion& region,
                                   const RegionSampleOptions& opts = {});

struct CrossCheckReport {
  bool prs_feasible = false;
  std::optional<double> delta_F;  // prs F_best - grid F_best
  bool within_slack = false;
};

CrossCheckReport cross_check_prs(const BilevelInstance& inst,
                                 const PrsResult& prs_result,
                                 const GridOracleResult& grid, double slack,
                                 double feas_tol = 1e-6);

}  // namespace prs

#endif  // PRS_ORACLE_HPP_
