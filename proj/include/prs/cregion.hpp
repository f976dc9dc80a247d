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

#ifndef PRS_CREGION_HPP_
#define PRS_CREGION_HPP_

#include <cstddef>
#include <vector>

#include "prs/lp.hpp"
#include "prs/model.hpp"

namespace prs {

// Values of the follower's integer variables, in y_integer_indices order.
using BinaryVector = std::vector<int>;

struct RegionOptions {
  double act_tol = 1e-6;
  double memb_tol = 1e-6;
  double cond_max = 1e10;
  // Rows with a smaller Euclidean norm are treated as constant rows.
  double zero_row_tol = 1e-10;
  bool eliminate_redundant = true;
  LpTolerances lp_tol;
};

struct ActiveSetInfo {
  BinaryVector y_I_fixed;
  // Exactly n_yC lower-level rows, ascending.
  std::vector<std::size_t> active_rows;
  // Rows of B2 restricted to the continuous follower columns; n_yC x n_yC.
  DenseMatrix basis_matrix;
  // Every selected multiplier exceeds act_tol.
  bool strict = true;
  // More rows were tight at the generator than could be selected.
  bool degenerate = false;
  // Multipliers of all lower rows for the selected basis (zero off-basis).
  Vector duals;
  // Continuous follower solution at the generator.
  Vector y_C;
};

// Solves the follower LP at (x0, y_I_fixed), ties broken as in
// solve_follower, and picks the rows of an optimal basis. At a degenerate
// vertex the basis is chosen so its multipliers stay lexicographically
// nonnegative under the tie objectives. When no such basis is found the
// remaining tight rows are added by decreasing multiplier, then index,
// keeping the rows linearly independent.
//
// Throws kLowerLevelInfeasible, kUnboundedLowerLevel or kSingularBasis
// (condition number >= cond_max after selection).
ActiveSetInfo identify_active_set(const BilevelInstance& inst,
                                  const BinaryVector& y_I_fixed,
                                  std::span<const double> x0,
                                  const RegionOptions& opts = {});

// y_C*(x) = K x + h inside the region.
struct AffineMap {
  DenseMatrix K;  // n_yC x n_x
  Vector h;       // n_yC
};

AffineMap affine_response(const BilevelInstance& inst, const ActiveSetInfo& info);

struct CriticalRegion {
  std::size_t id = 0;
  BinaryVector y_I_fixed;
  std::vector<std::size_t> active_rows;
  DenseMatrix K;
  Vector h;
  // E x <= f with unit-norm rows.
  DenseMatrix E;
  Vector f;
  Vector generator_x;
  Vector duals;
  bool strict = true;
  bool degenerate = false;

  std::size_t n_x() const { return generator_x.size(); }
  // Full follower response (continuous from K x + h, binaries from
  // y_I_fixed) in declaration order.
  Vector response(const BilevelInstance& inst, std::span<const double> x) const;
};

// Substitutes K x + h and y_I_fixed into every inactive lower row and every
// upper row (lower rows first, each block in index order), scales each row to
// unit norm, drops constant rows and, optionally, rows implied by the rest.
// Throws kEmptyRegion when a constant row is violated or x0 falls outside.
CriticalRegion build_critical_region(const BilevelInstance& inst,
                                     const ActiveSetInfo& info,
                                     const AffineMap& map,
                                     std::span<const double> x0,
                                     const RegionOptions& opts = {});

// All three steps.
CriticalRegion make_region(const BilevelInstance& inst,
                           const BinaryVector& y_I_fixed,
                           std::span<const double> x0,
                           const RegionOptions& opts = {});

// y_I_current == region.y_I_fixed and E x <= f + memb_tol.
bool contains(const CriticalRegion& region, std::span<const double> x,
              const BinaryVector& y_I_current, double memb_tol);

// Scales each row of (E, f) to unit Euclidean norm, dropping rows whose norm
// is below zero_row_tol. Returns false if a dropped row has f < -memb_tol.
bool normalize_halfspaces(DenseMatrix& E, Vector& f, double zero_row_tol,
                          double memb_tol);

// Removes rows implied by the remaining ones (one LP per row, in order).
void remove_redundant_rows(DenseMatrix& E, Vector& f,
                           const LpTolerances& tol = {});

// Follower LP in y_C with the binaries fixed:
//   min d2C y_C  s.t.  B2C y_C <= b2 - A2 x - B2I y_I.
LpProblem continuous_follower_lp(const BilevelInstance& inst,
                                 const BinaryVector& y_I,
                                 std::span<const double> x);

// Continuous follower response with the binaries fixed, ties broken as in
// solve_follower.
LpSolution solve_continuous_follower(const BilevelInstance& inst,
                                     const BinaryVector& y_I,
                                     std::span<const double> x,
                                     const LpTolerances& tol = {});

// y_I as a BinaryVector read from a full follower vector.
BinaryVector binary_part(const BilevelInstance& inst, std::span<const double> y);

}  // namespace prs

#endif  // PRS_CREGION_HPP_
