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

#ifndef PRS_MODEL_HPP_
#define PRS_MODEL_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prs/linalg.hpp"
#include "prs/milp.hpp"

namespace prs {

// Mixed-integer linear bilevel program
//
//   min_{x,y}  c1'x + d1'y   s.t.  A1 x + B1 y <= b1,
//              y in argmin_z { c2'x + d2'z : A2 x + B2 z <= b2 }
//
// Variables keep declaration order; integer membership is carried by the
// index sets, not by position.
struct BilevelInstance {
  std::size_t n_xC = 0, n_xI = 0, n_yC = 0, n_yI = 0;
  Vector c1, d1;
  DenseMatrix A1, B1;
  Vector b1;
  Vector c2, d2;
  DenseMatrix A2, B2;
  Vector b2;
  std::vector<std::size_t> x_integer_indices;
  std::vector<std::size_t> y_integer_indices;

  std::size_t n_x() const { return n_xC + n_xI; }
  std::size_t n_y() const { return n_yC + n_yI; }
  std::size_t m1() const { return b1.size(); }
  std::size_t m2() const { return b2.size(); }

  // Complements of the integer index sets, ascending.
  std::vector<std::size_t> x_continuous_indices() const;
  std::vector<std::size_t> y_continuous_indices() const;

  double upper_objective(std::span<const double> x,
                         std::span<const double> y) const;
  double lower_objective(std::span<const double> x,
                         std::span<const double> y) const;
  // max over rows of (A x + B y - b)_+ for the given block.
  double upper_violation(std::span<const double> x,
                         std::span<const double> y) const;
  double lower_violation(std::span<const double> x,
                         std::span<const double> y) const;
};

struct BilevelPoint {
  Vector x;
  Vector y;
  double F = 0.0;
  double f = 0.0;
};

BilevelPoint make_point(const BilevelInstance& inst, Vector x, Vector y);

// Every dimension or finiteness violation, one message each; empty when the
// instance is well formed.
std::vector<std::string> validate(const BilevelInstance& inst);
// Throws kMalformedProblem listing the violations.
void require_valid(const BilevelInstance& inst);

struct IntegerBounds {
  double lo = 0.0;
  double hi = 1.0;
};

struct ExpansionResult {
  BilevelInstance instance;
  // Objective constants dropped by the substitution v = lo + sum w_k b_k.
  double upper_offset = 0.0;
  double lower_offset = 0.0;
  // For every original x / y variable, the expanded columns and weights
  // (a continuous or binary variable maps to itself with weight 1).
  std::vector<std::vector<std::pair<std::size_t, double>>> x_map, y_map;
  Vector x_shift, y_shift;

  Vector recover_x(std::span<const double> x_expanded) const;
  Vector recover_y(std::span<const double> y_expanded) const;
};

// Replaces every general integer variable listed in the bound maps (keyed by
// original x / y index) by ceil(log2(range + 1)) binaries with weights
// 1, 2, 4, ... plus a range row when 2^k - 1 exceeds the range. Integer
// variables without an entry are taken to be binary already. Throws
// kUnboundedInteger for non-finite or non-integral bounds.
ExpansionResult expand_integers_to_binary(
    const BilevelInstance& inst,
    const std::map<std::size_t, IntegerBounds>& x_bounds,
    const std::map<std::size_t, IntegerBounds>& y_bounds);

struct LowerLevelProblem {
  MilpProblem milp;
  // c2'x_hat, dropped from the follower objective.
  double constant = 0.0;
};

// min d2'z  s.t.  B2 z <= b2 - A2 x_hat, z_I binary.
LowerLevelProblem lower_level_milp(const BilevelInstance& inst,
                                   std::span<const double> x_hat);

struct FollowerResponse {
  Vector y;
  double f = 0.0;  // c2'x + d2'y
};

// Objectives that break ties among follower optima, over the continuous
// follower columns in index order: the leader's d1, then fixed generic
// weights that single out one vertex of what is left.
std::vector<Vector> follower_tie_objectives(const BilevelInstance& inst);

// Optimistic follower response at x: among follower optima (d2'y within
// 1e-9 relative of the optimum) one with the least leader cost d1'y, with the
// continuous part taken as the lexicographic LP optimum under
// follower_tie_objectives. Throws kLowerLevelInfeasible or
// kUnboundedLowerLevel.
FollowerResponse solve_follower(const BilevelInstance& inst,
                                std::span<const double> x, double rel_gap);

// Follower optimal value c2'x + d2'y at x, without tie-breaking.
double follower_value(const BilevelInstance& inst, std::span<const double> x,
                      double rel_gap);

struct FeasibilityReport {
  bool feasible = false;
  double follower_gap = 0.0;
  double upper_violation = 0.0;
  double lower_violation = 0.0;
  bool integral = true;
  double follower_optimum = 0.0;
};

// Throws kLowerLevelInfeasible when no follower response exists at x.
FeasibilityReport check_bilevel_feasible(const BilevelInstance& inst,
                                         std::span<const double> x,
                                         std::span<const double> y, double tol,
                                         double rel_gap = 1e-9);

}  // namespace prs

#endif  // PRS_MODEL_HPP_
