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

#ifndef PRS_HPR_HPP_
#define PRS_HPR_HPP_

#include <optional>

#include "prs/model.hpp"

namespace prs {

// High-point relaxation: the single-level MILP over all upper and lower rows,
// follower optimality dropped.
struct HprRelaxation {
  Vector x_hat;
  Vector y_hat;
  double F_hpr = 0.0;
};

// Throws kInfeasibleInstance (HPR infeasible, so the bilevel program is too)
// or kUnboundedInstance.
HprRelaxation hpr_relax(const BilevelInstance& inst, double rel_gap = 1e-6);

struct HprResponse {
  Vector y_star;
  double F = 0.0;
  double f = 0.0;
  // The follower's answer may break a coupling row A1 x + B1 y <= b1; that
  // is reported here and not treated as an error.
  bool upper_feasible = true;
  double upper_violation = 0.0;
};

// Follower response at x_hat; same code path as solve_follower.
HprResponse hpr_response(const BilevelInstance& inst, std::span<const double> x_hat,
                         double rel_gap = 1e-6, double feas_tol = 1e-6);

struct HprResult {
  Vector x_hat;
  Vector y_hat;
  std::optional<Vector> y_star;
  double F_hpr = 0.0;
  std::optional<double> F_hprr;
  bool upper_feasible = true;
};

// Both steps. When the follower has no response at x_hat, y_star and F_hprr
// are left empty.
HprResult run_hpr(const BilevelInstance& inst, double rel_gap = 1e-6,
                  double feas_tol = 1e-6);

}  // namespace prs

#endif  // PRS_HPR_HPP_
