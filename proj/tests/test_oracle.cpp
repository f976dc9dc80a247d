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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "prs/errors.hpp"
#include "prs/generator.hpp"
#include "prs/hpr.hpp"
#include "prs/oracle.hpp"
#include "test_util.hpp"

namespace prs {
namespace {

TEST(UpperBox, ReadsBoxRows) {
  const BilevelInstance inst = testing::worked_example();
  const auto box = upper_box(inst);
  ASSERT_TRUE(box.has_value());
  EXPECT_EQ(box->lo, (Vector{-4.85, -4.85}));
  EXPECT_EQ(box->hi, (Vector{4.85, 4.85}));
  BilevelInstance open = inst;
  open.A1 = open.A1.select_rows(std::vector<std::size_t>{0, 1, 2});
  open.B1 = open.B1.select_rows(std::vector<std::size_t>{0, 1, 2});
  open.b1.pop_back();
  EXPECT_FALSE(upper_box(open).has_value());
}

TEST(GridOracle, WorkedExampleMatchesOrBeatsPrs) {
  const BilevelInstance inst = testing::worked_example();
  const GridOracleResult g = grid_oracle(inst, *upper_box(inst), 195);
  EXPECT_EQ(g.evaluated, 195u * 195u);
  ASSERT_TRUE(g.best.has_value());
  EXPECT_LE(g.best->F, 12.0479 + 0.2);
  EXPECT_TRUE(check_bilevel_feasible(inst, g.best->x, g.best->y, 1e-6).feasible);
}

TEST(GridOracle, ResolutionOneUsesCenter) {
  const BilevelInstance inst = testing::worked_example();
  const GridOracleResult g = grid_oracle(inst, *upper_box(inst), 1);
  EXPECT_EQ(g.evaluated, 1u);
  if (g.best) {
    EXPECT_NEAR(g.best->x[0], 0.0, 1e-15);
    EXPECT_NEAR(g.best->x[1], 0.0, 1e-15);
  }
}

TEST(GridOracle, RejectsHighDimension) {
  const BilevelInstance inst = generate_instance(size_preset("tiny"), 1).instance;
  try {
    grid_oracle(inst, uniform_box(inst.n_x(), -1, 1), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionTooLarge);
  }
}

TEST(GridOracle, ParallelMatchesSerial) {
  const BilevelInstance inst = testing::worked_example();
  const Box box = *upper_box(inst);
  const GridOracleResult a = grid_oracle(inst, box, 41, 1);
  const GridOracleResult b = grid_oracle(inst, box, 41, 4);
  ASSERT_TRUE(a.best && b.best);
  EXPECT_EQ(a.best->x, b.best->x);
  EXPECT_EQ(a.best->F, b.best->F);
  EXPECT_EQ(a.feasible, b.feasible);
}

TEST(GridOracle, NestedGridsImprove) {
  // Resolution 2k-1 contains every point of resolution k.
  const BilevelInstance inst = testing::worked_example();
  const Box box = *upper_box(inst);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k : {5u, 9u, 17u, 33u, 65u}) {
    const GridOracleResult g = grid_oracle(inst, box, k, 1);
    ASSERT_TRUE(g.best.has_value());
    EXPECT_LE(g.best->F, prev + 1e-12);
    prev = g.best->F;
  }
}

TEST(RegionAtlas, RediscoversWorkedExampleRegions) {
  const BilevelInstance inst = testing::worked_example();
  const Box box = *upper_box(inst);
  const RegionAtlas a0 = enumerate_regions(inst, {0}, box, 500, 3);
  const Vector x0 = {-4.85, -4.85};
  const CriticalRegion cr1 = make_region(inst, {0}, x0);
  bool found = false;
  for (const CriticalRegion& r : a0.regions) {
    if (r.active_rows == cr1.active_rows) {
      found = true;
      EXPECT_TRUE(contains(r, Vector{-2.0, -1.0}, {0}, 1e-6));
    }
  }
  EXPECT_TRUE(found);
  const RegionAtlas a1 = enumerate_regions(inst, {1}, box, 500, 3);
  EXPECT_FALSE(a1.regions.empty());
  EXPECT_EQ(a0.coverage_samples + a0.infeasible_samples + a0.uncovered.size(), 500u);
}

TEST(CrossCheck, WorkedExample) {
  const BilevelInstance inst = testing::worked_example();
  const HprResult h = run_hpr(inst);
  const PrsResult p = prs_solve(inst, h.x_hat);
  const GridOracleResult g = grid_oracle(inst, *upper_box(inst), 195);
  const CrossCheckReport c = cross_check_prs(inst, p, g, 0.2);
  EXPECT_TRUE(c.prs_feasible);
  ASSERT_TRUE(c.delta_F.has_value());
  // The grid finds a far better point near x1 = 4.85 that the search from
  // the relaxation's corner never reaches.
  EXPECT_GT(*c.delta_F, 0.2);
  EXPECT_FALSE(c.within_slack);
  EXPECT_NEAR(g.best->F, -291.456, 1e-3);
}

TEST(Resample, ThinRegionReportsZeroRadius) {
  const BilevelInstance inst = testing::worked_example();
  CriticalRegion r = make_region(inst, {0}, Vector{-4.85, -4.85});
  // Collapse the region to a segment.
  r.E.append_row(Vector{0, 1});
  r.f.push_back(-4.85);
  r.E.append_row(Vector{0, -1});
  r.f.push_back(4.85);
  const RegionSampleReport rep = resample_region(inst, r);
  EXPECT_EQ(rep.samples, 0u);
  EXPECT_LE(rep.inner_radius, 1e-9);
}

}  // namespace
}  // namespace prs
