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

#include <algorithm>
#include <array>
#include <cmath>

#include "prs/cregion.hpp"
#include "prs/errors.hpp"
#include "prs/oracle.hpp"
#include "test_util.hpp"

namespace prs {
namespace {

const Vector kX0 = {-4.85, -4.85};
const Vector kX2 = {-4.85, 1.2436};
// Just inside the rounded boundary 1.5535.
const Vector kX3 = {-4.85, 1.5534};

// Each expected row (e1, e2 | f) must match a distinct row of the region.
void expect_rows(const CriticalRegion& r, const std::vector<std::array<double, 3>>& rows,
                 double tol) {
  ASSERT_EQ(r.E.rows(), rows.size());
  std::vector<bool> used(rows.size(), false);
  for (const auto& want : rows) {
    bool found = false;
    for (std::size_t i = 0; i < r.E.rows() && !found; ++i) {
      if (used[i]) continue;
      if (std::abs(r.E(i, 0) - want[0]) <= tol && std::abs(r.E(i, 1) - want[1]) <= tol &&
          std::abs(r.f[i] - want[2]) <= tol) {
        used[i] = found = true;
      }
    }
    EXPECT_TRUE(found) << "row (" << want[0] << ", " << want[1] << " | " << want[2] << ")";
  }
}

TEST(ActiveSet, WorkedExampleCr1AndCr2) {
  const BilevelInstance inst = testing::worked_example();
  const ActiveSetInfo a1 = identify_active_set(inst, {0}, kX0);
  EXPECT_EQ(a1.active_rows, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(a1.strict);
  EXPECT_FALSE(a1.degenerate);
  EXPECT_EQ(a1.basis_matrix.rows(), 1u);
  const ActiveSetInfo a2 = identify_active_set(inst, {1}, kX2);
  EXPECT_EQ(a2.active_rows, (std::vector<std::size_t>{0}));
}

TEST(ActiveSet, ErrorsAtBadPoints) {
  BilevelInstance inst = testing::worked_example();
  inst.b2[4] = -1000.0;
  try {
    identify_active_set(inst, {0}, kX0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLowerLevelInfeasible);
  }
  BilevelInstance unb = testing::worked_example();
  unb.d2[1] = 3.6;  // minimise y2: only -10 y2 <= 100 bounds it below
  unb.B2(1, 1) = 0.0;
  unb.B2(4, 1) = 0.0;
  try {
    identify_active_set(unb, {0}, kX0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnboundedLowerLevel);
  }
  EXPECT_THROW(identify_active_set(inst, {0, 1}, kX0), Error);
}

TEST(ActiveSet, AllBinaryFollowerHasEmptyBasis) {
  BilevelInstance inst = testing::worked_example();
  // Drop the continuous follower column.
  inst.n_yC = 0;
  inst.d1 = {0.0};
  inst.d2 = {1.0};
  inst.B1 = inst.B1.select_cols(std::vector<std::size_t>{0});
  inst.B2 = inst.B2.select_cols(std::vector<std::size_t>{0});
  const ActiveSetInfo a = identify_active_set(inst, {0}, Vector{0.0, 0.0});
  EXPECT_TRUE(a.active_rows.empty());
  EXPECT_EQ(a.basis_matrix.rows(), 0u);
  const AffineMap m = affine_response(inst, a);
  EXPECT_EQ(m.K.rows(), 0u);
  const CriticalRegion r = build_critical_region(inst, a, m, Vector{0.0, 0.0});
  // The region is the lower-feasible set for y1 = 0 within the box.
  EXPECT_TRUE(contains(r, Vector{0.0, 0.0}, {0}, 1e-9));
}

TEST(AffineResponse, Cr1AndCr2Goldens) {
  const BilevelInstance inst = testing::worked_example();
  const AffineMap m1 = affine_response(inst, identify_active_set(inst, {0}, kX0));
  EXPECT_NEAR(m1.K(0, 0), 0.0, 1e-3);
  EXPECT_NEAR(m1.K(0, 1), -1.3220, 1e-3);
  EXPECT_NEAR(m1.h[0], 0.5085, 1e-3);
  const AffineMap m2 = affine_response(inst, identify_active_set(inst, {1}, kX2));
  EXPECT_NEAR(m2.K(0, 1), -1.3220, 1e-3);
  EXPECT_NEAR(m2.h[0], 0.8475, 1e-3);
}

TEST(AffineResponse, ActiveResidualAtGenerator) {
  const BilevelInstance inst = testing::worked_example();
  const ActiveSetInfo a = identify_active_set(inst, {0}, kX0);
  const AffineMap m = affine_response(inst, a);
  const Vector yc = m.K.multiply(kX0);
  const double y = yc[0] + m.h[0];
  // Active row 0: A2 x + B2 y = b2.
  const double lhs = inst.A2(0, 0) * kX0[0] + inst.A2(0, 1) * kX0[1] + inst.B2(0, 1) * y;
  EXPECT_NEAR(lhs, inst.b2[0], 1e-8);
}

TEST(AffineResponse, SlopeMatchesFiniteDifferences) {
  const BilevelInstance inst = testing::worked_example();
  const CriticalRegion r = make_region(inst, {0}, kX0);
  const Vector xc = {-2.0, -1.0};  // interior point of CR1
  ASSERT_TRUE(contains(r, xc, {0}, 0.0));
  const double h = 1e-4;
  for (std::size_t j = 0; j < 2; ++j) {
    Vector xp = xc, xm = xc;
    xp[j] += h;
    xm[j] -= h;
    const LpSolution sp = solve_lp(continuous_follower_lp(inst, {0}, xp));
    const LpSolution sm = solve_lp(continuous_follower_lp(inst, {0}, xm));
    const double slope = (sp.primal[0] - sm.primal[0]) / (2 * h);
    EXPECT_NEAR(slope, r.K(0, j), 1e-5);
  }
}

TEST(BuildRegion, Cr1Golden) {
  const BilevelInstance inst = testing::worked_example();
  const CriticalRegion r = make_region(inst, {0}, kX0);
  expect_rows(r,
              {{{0, 1, 1.2437}},
               {{0.7765, -0.6301, 0.6295}},
               {{0.9228, 0.3852, 1.1456}},
               {{-1, 0, 4.85}},
               {{0, -1, 4.85}}},
              1e-3);
}

TEST(BuildRegion, Cr2Golden) {
  const BilevelInstance inst = testing::worked_example();
  const CriticalRegion r = make_region(inst, {1}, kX2);
  expect_rows(r, {{{0, 1, 1.5535}}, {{0.7765, -0.6301, -0.8068}}, {{-1, 0, 4.85}}}, 1e-3);
}

TEST(BuildRegion, PreNormalizationRowFromLowerRowTwo) {
  const BilevelInstance inst = testing::worked_example();
  const ActiveSetInfo a = identify_active_set(inst, {0}, kX0);
  const AffineMap m = affine_response(inst, a);
  // Lower row 2 with y2 = K x + h substituted.
  const double e1 = inst.A2(2, 0) + inst.B2(2, 1) * m.K(0, 0);
  const double e2 = inst.A2(2, 1) + inst.B2(2, 1) * m.K(0, 1);
  const double f = inst.b2[2] - inst.B2(2, 1) * m.h[0];
  EXPECT_NEAR(e1, 4.7, 1e-9);
  EXPECT_NEAR(e2, -3.8134, 1e-3);
  EXPECT_NEAR(f, 3.81005, 1e-3);
  const double n = std::hypot(e1, e2);
  EXPECT_NEAR(n, 6.053, 1e-3);
  EXPECT_NEAR(e1 / n, 0.7765, 1e-4);
  EXPECT_NEAR(f / n, 0.6295, 1e-4);
}

TEST(BuildRegion, RowsHaveUnitNorm) {
  const BilevelInstance inst = testing::worked_example();
  for (const auto& [yb, x] : {std::pair{BinaryVector{0}, kX0}, std::pair{BinaryVector{1}, kX2}}) {
    const CriticalRegion r = make_region(inst, yb, x);
    for (std::size_t i = 0; i < r.E.rows(); ++i) {
      EXPECT_NEAR(norm2(r.E.row(i)), 1.0, 1e-9);
    }
    EXPECT_TRUE(contains(r, x, yb, 1e-8));
  }
}

TEST(BuildRegion, RedundancyOffKeepsEveryRow) {
  const BilevelInstance inst = testing::worked_example();
  RegionOptions o;
  o.eliminate_redundant = false;
  const CriticalRegion full = make_region(inst, {0}, kX0, o);
  // 4 inactive lower rows + 4 upper rows; the all-zero x row 4 becomes
  // 10 * 1.322 x2 ... and stays.
  EXPECT_EQ(full.E.rows(), 8u);
  const CriticalRegion lean = make_region(inst, {0}, kX0);
  EXPECT_LT(lean.E.rows(), full.E.rows());
  // Same polytope: every generator and golden point agrees.
  for (const Vector& x : {kX0, Vector{-2.0, -1.0}, Vector{4.0, 4.0}, Vector{0.0, 1.3}}) {
    EXPECT_EQ(contains(full, x, {0}, 1e-9), contains(lean, x, {0}, 1e-9));
  }
}

TEST(BuildRegion, ViolatedConstantRowIsEmptyRegion) {
  DenseMatrix E = DenseMatrix::from_rows({{0, 0}, {1, 0}});
  Vector f = {-1.0, 2.0};
  EXPECT_FALSE(normalize_halfspaces(E, f, 1e-10, 1e-6));
}

TEST(Normalize, Idempotent) {
  DenseMatrix E = DenseMatrix::from_rows({{3, 4}, {0, 2}, {0, 0}, {-1, 1}});
  Vector f = {10, 1, 0.5, 3};
  ASSERT_TRUE(normalize_halfspaces(E, f, 1e-10, 1e-6));
  const DenseMatrix E1 = E;
  const Vector f1 = f;
  ASSERT_TRUE(normalize_halfspaces(E, f, 1e-10, 1e-6));
  EXPECT_EQ(E.rows(), 3u);
  for (std::size_t i = 0; i < E.rows(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(E(i, j), E1(i, j), 1e-15);
    EXPECT_NEAR(f[i], f1[i], 1e-15);
  }
}

TEST(Contains, MembershipAndBinaryGate) {
  const BilevelInstance inst = testing::worked_example();
  const CriticalRegion cr1 = make_region(inst, {0}, kX0);
  const CriticalRegion cr2 = make_region(inst, {1}, kX2);
  EXPECT_TRUE(contains(cr1, kX0, {0}, 1e-6));
  EXPECT_TRUE(contains(cr2, kX3, {1}, 1e-6));
  EXPECT_FALSE(contains(cr1, kX3, {1}, 1e-6));
  EXPECT_FALSE(contains(cr2, Vector{-4.85, 1.7}, {1}, 1e-6));
}

TEST(Redundancy, DuplicateRowsCollapseToOne) {
  DenseMatrix E = DenseMatrix::from_rows({{1, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}});
  Vector f = {1, 1, 1, 1, 1, 5};
  remove_redundant_rows(E, f);
  EXPECT_EQ(E.rows(), 4u);
}

TEST(SampledConsistency, WorkedExampleRegions) {
  const BilevelInstance inst = testing::worked_example();
  for (const auto& [yb, x] : {std::pair{BinaryVector{0}, kX0}, std::pair{BinaryVector{1}, kX2}}) {
    const CriticalRegion r = make_region(inst, yb, x);
    RegionSampleOptions o;
    o.samples = 200;
    o.seed = 9;
    const RegionSampleReport rep = resample_region(inst, r, o);
    EXPECT_EQ(rep.samples, 200u);
    EXPECT_TRUE(rep.passed()) << rep.active_set_mismatches << " " << rep.response_mismatches
                              << " " << rep.dual_mismatches;
    EXPECT_GT(rep.inner_radius, 0.0);
  }
}

}  // namespace
}  // namespace prs
