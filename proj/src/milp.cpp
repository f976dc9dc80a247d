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

#include "prs/milp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>

#include "prs/errors.hpp"

namespace prs {
namespace {

// -1 free, 0 or 1 fixed; indexed like binary_indices.
using Fixing = std::vector<std::int8_t>;

struct NodeLp {
  LpSolution lp;
  Vector full;  // primal in the original column space
  double objective = 0.0;
};

class NodeBuilder {
 public:
  explicit NodeBuilder(const MilpProblem& p) : p_(p) {
    const std::size_t n = p.base.num_vars();
    binary_pos_.assign(n, -1);
    for (std::size_t k = 0; k < p.binary_indices.size(); ++k) {
      binary_pos_[p.binary_indices[k]] = static_cast<std::ptrdiff_t>(k);
    }
  }

  NodeLp solve(const Fixing& fix, const LpTolerances& tol) const {
    const LpProblem& base = p_.base;
    const std::size_t n = base.num_vars();
    const std::size_t m = base.num_rows();
    std::vector<std::size_t> keep;
    std::vector<std::size_t> free_bins;
    keep.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::ptrdiff_t k = binary_pos_[j];
      if (k < 0 || fix[static_cast<std::size_t>(k)] < 0) keep.push_back(j);
      if (k >= 0 && fix[static_cast<std::size_t>(k)] < 0) free_bins.push_back(j);
    }

    LpProblem lp;
    lp.c.resize(keep.size());
    lp.kinds.resize(keep.size());
    std::vector<std::ptrdiff_t> new_col(n, -1);
    for (std::size_t q = 0; q < keep.size(); ++q) {
      const std::size_t j = keep[q];
      new_col[j] = static_cast<std::ptrdiff_t>(q);
      lp.c[q] = base.c[j];
      lp.kinds[q] = binary_pos_[j] >= 0 ? VarKind::kNonNegative : base.kinds[j];
    }
    double constant = 0.0;
    Vector full_fixed(n, 0.0);
    for (std::size_t k = 0; k < p_.binary_indices.size(); ++k) {
      if (fix[k] >= 0) {
        const std::size_t j = p_.binary_indices[k];
        full_fixed[j] = fix[k];
        constant += base.c[j] * fix[k];
      }
    }
    lp.A = DenseMatrix(m + free_bins.size(), keep.size());
    lp.b.resize(m + free_bins.size());
    for (std::size_t i = 0; i < m; ++i) {
      double rhs = base.b[i];
      for (std::size_t j = 0; j < n; ++j) {
        const double a = base.A(i, j);
        if (new_col[j] >= 0) {
          lp.A(i, static_cast<std::size_t>(new_col[j])) = a;
        } else if (full_fixed[j] != 0.0) {
          rhs -= a * full_fixed[j];
        }
      }
      lp.b[i] = rhs;
    }
    for (std::size_t q = 0; q < free_bins.size(); ++q) {
      lp.A(m + q, static_cast<std::size_t>(new_col[free_bins[q]])) = 1.0;
      lp.b[m + q] = 1.0;
    }

    NodeLp out;
    out.lp = solve_lp(lp, tol);
    if (out.lp.status == LpStatus::kOptimal) {
      out.full = full_fixed;
      for (std::size_t q = 0; q < keep.size(); ++q) {
        out.full[keep[q]] = out.lp.primal[q];
      }
      out.objective = out.lp.objective + constant;
    }
    return out;
  }

 private:
  const MilpProblem& p_;
  std::vector<std::ptrdiff_t> binary_pos_;
};

struct Node {
  double bound;
  std::size_t id;
  Fixing fix;
  Vector point;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

void validate_milp(const MilpProblem& p) {
  validate_lp(p.base);
  std::vector<bool> seen(p.base.num_vars(), false);
  for (std::size_t j : p.binary_indices) {
    if (j >= p.base.num_vars() || seen[j]) {
      throw Error(ErrorCode::kMalformedProblem,
                  "binary index out of range or repeated: " + std::to_string(j));
    }
    seen[j] = true;
  }
}

LpProblem fix_binaries(const MilpProblem& problem,
                       std::span<const double> values, double& constant) {
  const LpProblem& base = problem.base;
  const std::size_t n = base.num_vars();
  Vector fixed(n, 0.0);
  std::vector<bool> is_bin(n, false);
  constant = 0.0;
  for (std::size_t k = 0; k < problem.binary_indices.size(); ++k) {
    const std::size_t j = problem.binary_indices[k];
    is_bin[j] = true;
    fixed[j] = values[k];
    constant += base.c[j] * values[k];
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_bin[j]) keep.push_back(j);
  }
  LpProblem lp;
  lp.A = base.A.select_cols(keep);
  lp.b = base.b;
  if (base.num_rows() > 0) {
    const Vector shift = base.A.multiply(fixed);
    for (std::size_t i = 0; i < lp.b.size(); ++i) lp.b[i] -= shift[i];
  }
  for (std::size_t j : keep) {
    lp.c.push_back(base.c[j]);
    lp.kinds.push_back(base.kinds[j]);
  }
  return lp;
}

MilpSolution solve_milp(const MilpProblem& problem, const MilpOptions& opts) {
  validate_milp(problem);
  const std::size_t nb = problem.binary_indices.size();
  NodeBuilder builder(problem);
  MilpSolution best;
  bool have_incumbent = false;

  auto prune = [&](double bound) {
    if (!have_incumbent) return false;
    const double slack =
        opts.rel_gap * std::max(std::abs(best.objective), 1e-10);
    return bound >= best.objective - slack;
  };

  auto integral = [&](const Vector& x) {
    for (std::size_t j : problem.binary_indices) {
      const double v = x[j];
      if (std::min(std::abs(v), std::abs(1.0 - v)) > opts.int_tol) return false;
    }
    return true;
  };

  auto polish = [&](const Vector& x) {
    Fixing fix(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      fix[k] = x[problem.binary_indices[k]] >= 0.5 ? 1 : 0;
    }
    NodeLp lp = builder.solve(fix, opts.lp_tol);
    if (lp.lp.status != LpStatus::kOptimal) return;
    if (!have_incumbent || lp.objective < best.objective) {
      best.primal = std::move(lp.full);
      best.objective = lp.objective;
      have_incumbent = true;
    }
  };

  std::size_t next_id = 0;
  std::size_t nodes = 0;
  NodeLp root = builder.solve(Fixing(nb, -1), opts.lp_tol);
  ++nodes;
  if (root.lp.status == LpStatus::kUnbounded) {
    best.status = MilpStatus::kUnbounded;
    best.node_count = nodes;
    return best;
  }
  if (root.lp.status == LpStatus::kInfeasible) {
    best.status = MilpStatus::kInfeasible;
    best.node_count = nodes;
    return best;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> frontier;
  if (integral(root.full)) {
    polish(root.full);
  } else {
    frontier.push({root.objective, next_id++, Fixing(nb, -1), root.full});
  }

  while (!frontier.empty()) {
    Node node = frontier.top();
    frontier.pop();
    if (opts.on_node_bound) opts.on_node_bound(node.bound);
    if (prune(node.bound)) break;
    if (opts.node_limit && nodes >= *opts.node_limit) {
      best.budget_exceeded = true;
      break;
    }

    std::ptrdiff_t branch = -1;
    double frac_best = -1.0;
    for (std::size_t k = 0; k < nb; ++k) {
      if (node.fix[k] >= 0) continue;
      const double v = node.point[problem.binary_indices[k]];
      const double frac = std::min(std::abs(v), std::abs(1.0 - v));
      if (frac > opts.int_tol && frac > frac_best) {
        frac_best = frac;
        branch = static_cast<std::ptrdiff_t>(k);
      }
    }
    if (branch < 0) continue;

    for (std::int8_t value : {std::int8_t{0}, std::int8_t{1}}) {
      Fixing fix = node.fix;
      fix[static_cast<std::size_t>(branch)] = value;
      NodeLp child = builder.solve(fix, opts.lp_tol);
      ++nodes;
      if (child.lp.status != LpStatus::kOptimal) continue;
      const double bound = std::max(node.bound, child.objective);
      if (integral(child.full)) {
        polish(child.full);
      } else if (!prune(bound)) {
        frontier.push({bound, next_id++, std::move(fix), std::move(child.full)});
      }
    }
  }

  best.node_count = nodes;
  best.status = have_incumbent ? MilpStatus::kOptimal : MilpStatus::kInfeasible;
  if (have_incumbent) {
    for (std::size_t j : problem.binary_indices) {
      best.primal[j] = best.primal[j] >= 0.5 ? 1.0 : 0.0;
    }
  }
  return best;
}

}  // namespace prs
