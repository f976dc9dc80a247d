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

#include "prs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "prs/errors.hpp"
#include "prs/simd/kernels.hpp"

namespace prs {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr int kDegenerateRunBeforeBland = 50;

enum class ColumnRole { kPlain, kShift, kMirror, kSplitPos, kSplitNeg };

struct StructuralColumn {
  std::size_t var;
  ColumnRole role;
  double sign;  // t_var += sign * u
};

// Maps the user problem onto u >= 0 columns.
struct ColumnMap {
  std::vector<StructuralColumn> cols;
  Vector offset;                     // t = offset + sum(sign * u)
  std::vector<std::ptrdiff_t> bound_row;  // per var, -1 if none
};

ColumnMap map_columns(const LpProblem& p) {
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_rows();
  ColumnMap map;
  map.offset.assign(n, 0.0);
  map.bound_row.assign(n, -1);

  // Singleton rows per column.
  std::vector<double> lb(n, -std::numeric_limits<double>::infinity());
  std::vector<double> ub(n, std::numeric_limits<double>::infinity());
  std::vector<std::ptrdiff_t> lb_row(n, -1), ub_row(n, -1);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t nnz = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (p.A(i, j) != 0.0) {
        ++nnz;
        col = j;
      }
    }
    if (nnz != 1) continue;
    const double a = p.A(i, col);
    const double bound = p.b[i] / a;
    if (a < 0.0 && bound > lb[col]) {
      lb[col] = bound;
      lb_row[col] = static_cast<std::ptrdiff_t>(i);
    } else if (a > 0.0 && bound < ub[col]) {
      ub[col] = bound;
      ub_row[col] = static_cast<std::ptrdiff_t>(i);
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (p.kinds[j] == VarKind::kNonNegative) {
      map.cols.push_back({j, ColumnRole::kPlain, 1.0});
    } else if (lb_row[j] >= 0) {
      map.offset[j] = lb[j];
      map.bound_row[j] = lb_row[j];
      map.cols.push_back({j, ColumnRole::kShift, 1.0});
    } else if (ub_row[j] >= 0) {
      map.offset[j] = ub[j];
      map.bound_row[j] = ub_row[j];
      map.cols.push_back({j, ColumnRole::kMirror, -1.0});
    } else {
      map.cols.push_back({j, ColumnRole::kSplitPos, 1.0});
      map.cols.push_back({j, ColumnRole::kSplitNeg, -1.0});
    }
  }
  return map;
}

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), width_(cols + 1),
        data_((rows + 1) * (cols + 1), 0.0), basic_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double rhs(std::size_t r) const { return at(r, n_); }
  double& cost(std::size_t c) { return at(m_, c); }
  double cost(std::size_t c) const { return at(m_, c); }
  std::span<double> row(std::size_t r) {
    return {data_.data() + r * width_, width_};
  }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::size_t basic(std::size_t r) const { return basic_[r]; }
  void set_basic(std::size_t r, std::size_t c) { basic_[r] = c; }

  void pivot(std::size_t r, std::size_t e) {
    const double piv = at(r, e);
    simd::scale(1.0 / piv, row(r));
    at(r, e) = 1.0;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, e);
      if (f == 0.0) continue;
      simd::axpy(-f, row(r), row(i));
      at(i, e) = 0.0;
    }
    basic_[r] = e;
  }

  // Rewrites the cost row so that basic columns have zero reduced cost.
  void price_out() {
    for (std::size_t r = 0; r < m_; ++r) {
      const double f = cost(basic_[r]);
      if (f != 0.0) {
        simd::axpy(-f, row(r), row(m_));
        cost(basic_[r]) = 0.0;
      }
    }
  }

 private:
  std::size_t m_, n_, width_;
  std::vector<double> data_;
  std::vector<std::size_t> basic_;
};

enum class RunResult { kOptimal, kUnbounded };

class SimplexRunner {
 public:
  SimplexRunner(Tableau& t, std::vector<bool> enterable)
      : t_(t), enterable_(std::move(enterable)) {}

  RunResult run(std::size_t& pivot_count) {
    const std::size_t cap = 50 * (t_.rows() + t_.cols()) + 1000;
    int degenerate_run = 0;
    bool bland = false;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > cap) {
        throw Error(ErrorCode::kNumericalFailure,
                    "simplex iteration cap exceeded");
      }
      const std::ptrdiff_t e = choose_entering(bland);
      if (e < 0) return RunResult::kOptimal;
      double step = 0.0;
      const std::ptrdiff_t r = choose_leaving(static_cast<std::size_t>(e),
                                              bland, step);
      if (r < 0) return RunResult::kUnbounded;
      t_.pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(e));
      ++pivot_count;
      if (step <= kDegenerateStep) {
        if (++degenerate_run >= kDegenerateRunBeforeBland) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  // Ratio test restricted to column e; returns -1 if no positive entry.
  std::ptrdiff_t choose_leaving(std::size_t e, bool bland, double& step) const {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      const double a = t_.at(i, e);
      if (a > kPivotTol) best = std::min(best, std::max(t_.rhs(i), 0.0) / a);
    }
    if (!std::isfinite(best)) return -1;
    step = best;
    const double tie = 1e-12 * (1.0 + best);
    std::ptrdiff_t pick = -1;
    for (std::size_t i = 0; i < t_.rows(); ++i) {
      const double a = t_.at(i, e);
      if (a <= kPivotTol) continue;
      if (std::max(t_.rhs(i), 0.0) / a > best + tie) continue;
      if (pick < 0) {
        pick = static_cast<std::ptrdiff_t>(i);
        continue;
      }
      const auto p = static_cast<std::size_t>(pick);
      if (bland) {
        if (t_.basic(i) < t_.basic(p)) pick = static_cast<std::ptrdiff_t>(i);
      } else if (a > t_.at(p, e)) {
        pick = static_cast<std::ptrdiff_t>(i);
      }
    }
    return pick;
  }

 private:
  std::ptrdiff_t choose_entering(bool bland) const {
    std::ptrdiff_t pick = -1;
    double most = -kReducedCostTol;
    for (std::size_t j = 0; j < t_.cols(); ++j) {
      if (!enterable_[j]) continue;
      const double d = t_.cost(j);
      if (bland) {
        if (d < -kReducedCostTol) return static_cast<std::ptrdiff_t>(j);
      } else if (d < most) {
        most = d;
        pick = static_cast<std::ptrdiff_t>(j);
      }
    }
    return pick;
  }

  Tableau& t_;
  std::vector<bool> enterable_;
};

}  // namespace

void validate_lp(const LpProblem& p) {
  const std::size_t n = p.c.size();
  const std::size_t m = p.b.size();
  if (p.A.rows() != m || (m > 0 && p.A.cols() != n) || p.kinds.size() != n) {
    throw Error(ErrorCode::kMalformedProblem,
                "LP dimensions inconsistent: |c|=" + std::to_string(n) +
                    " |b|=" + std::to_string(m) + " A=" +
                    std::to_string(p.A.rows()) + "x" +
                    std::to_string(p.A.cols()) +
                    " kinds=" + std::to_string(p.kinds.size()));
  }
  if (!all_finite(p.c) || !all_finite(p.b) || !p.A.all_finite()) {
    throw Error(ErrorCode::kMalformedProblem, "LP has non-finite entries");
  }
}

LpSolution solve_lp(const LpProblem& p, const LpTolerances& tol) {
  validate_lp(p);
  const std::size_t n = p.num_vars();
  const std::size_t m = p.num_rows();
  const ColumnMap map = map_columns(p);
  const std::size_t ns = map.cols.size();

  // Effective right-hand side after the column offsets.
  Vector r(m);
  for (std::size_t i = 0; i < m; ++i) {
    double shift = 0.0, scale = std::abs(p.b[i]);
    for (std::size_t j = 0; j < n; ++j) {
      const double s = p.A(i, j) * map.offset[j];
      shift += s;
      scale += std::abs(s);
    }
    r[i] = p.b[i] - shift;
    if (std::abs(r[i]) <= 1e-12 * (1.0 + scale)) r[i] = 0.0;
  }

  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (r[i] < 0.0) art_rows.push_back(i);
  }
  const std::size_t slack0 = ns;
  const std::size_t art0 = ns + m;
  const std::size_t ncols = ns + m + art_rows.size();

  Tableau t(m, ncols);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < ns; ++k) {
      t.at(i, k) = p.A(i, map.cols[k].var) * map.cols[k].sign;
    }
    t.at(i, slack0 + i) = 1.0;
    t.rhs(i) = r[i];
    t.set_basic(i, slack0 + i);
  }
  for (std::size_t a = 0; a < art_rows.size(); ++a) {
    const std::size_t i = art_rows[a];
    simd::scale(-1.0, t.row(i));
    t.at(i, art0 + a) = 1.0;
    t.set_basic(i, art0 + a);
  }

  LpSolution sol;
  std::vector<bool> enterable(ncols, true);
  for (std::size_t c = art0; c < ncols; ++c) enterable[c] = false;

  if (!art_rows.empty()) {
    for (std::size_t c = art0; c < ncols; ++c) t.cost(c) = 1.0;
    t.price_out();
    SimplexRunner phase1(t, enterable);
    phase1.run(sol.pivots);
    double rmax = 0.0;
    for (double v : r) rmax = std::max(rmax, std::abs(v));
    const double infeas = -t.rhs(m);
    if (infeas > 1e-9 * (1.0 + rmax)) {
      sol.status = LpStatus::kInfeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basic(i) < art0) continue;
      std::ptrdiff_t best = -1;
      double mag = kPivotTol;
      for (std::size_t c = 0; c < art0; ++c) {
        if (std::abs(t.at(i, c)) > mag) {
          mag = std::abs(t.at(i, c));
          best = static_cast<std::ptrdiff_t>(c);
        }
      }
      if (best >= 0) {
        t.pivot(i, static_cast<std::size_t>(best));
        ++sol.pivots;
      }
    }
  }

  // Phase 2 costs.
  for (std::size_t c = 0; c <= ncols; ++c) t.cost(c) = 0.0;
  for (std::size_t k = 0; k < ns; ++k) {
    t.cost(k) = p.c[map.cols[k].var] * map.cols[k].sign;
  }
  t.price_out();
  SimplexRunner phase2(t, enterable);
  if (phase2.run(sol.pivots) == RunResult::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    return sol;
  }

  // A split free column with both halves nonbasic sits at zero without a
  // defining row; bring one half into the basis when its reduced cost is zero.
  std::vector<bool> is_basic(ncols, false);
  for (std::size_t i = 0; i < m; ++i) is_basic[t.basic(i)] = true;
  for (std::size_t k = 0; k + 1 < ns; ++k) {
    if (map.cols[k].role != ColumnRole::kSplitPos) continue;
    if (is_basic[k] || is_basic[k + 1]) continue;
    for (std::size_t c : {k, k + 1}) {
      if (std::abs(t.cost(c)) > kReducedCostTol) continue;
      double step = 0.0;
      const std::ptrdiff_t rr = phase2.choose_leaving(c, true, step);
      if (rr < 0) continue;
      is_basic[t.basic(static_cast<std::size_t>(rr))] = false;
      t.pivot(static_cast<std::size_t>(rr), c);
      is_basic[c] = true;
      ++sol.pivots;
      break;
    }
  }

  Vector u(ncols, 0.0);
  for (std::size_t i = 0; i < m; ++i) u[t.basic(i)] = t.rhs(i);
  sol.primal = map.offset;
  for (std::size_t k = 0; k < ns; ++k) {
    sol.primal[map.cols[k].var] += map.cols[k].sign * u[k];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (p.kinds[j] == VarKind::kNonNegative && sol.primal[j] < 0.0 &&
        sol.primal[j] > -tol.feas) {
      sol.primal[j] = 0.0;
    }
  }

  sol.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = t.cost(slack0 + i);
  std::vector<std::size_t> basis;
  for (std::size_t i = 0; i < m; ++i) {
    if (!is_basic[slack0 + i]) basis.push_back(i);
  }
  for (std::size_t k = 0; k < ns; ++k) {
    const auto& col = map.cols[k];
    if (col.role != ColumnRole::kShift && col.role != ColumnRole::kMirror) {
      continue;
    }
    if (is_basic[k]) continue;
    const auto row = static_cast<std::size_t>(map.bound_row[col.var]);
    sol.duals[row] += t.cost(k) / std::abs(p.A(row, col.var));
    basis.push_back(row);
  }
  std::sort(basis.begin(), basis.end());
  basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
  sol.basis = std::move(basis);

  sol.objective = dot(p.c, sol.primal);
  sol.status = LpStatus::kOptimal;
  if (m > 0) {
    const Vector at = p.A.multiply(sol.primal);
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(p.b[i] - at[i]) <= tol.act) sol.active_set.push_back(i);
    }
  }
  return sol;
}

LpSolution solve_lp_lexicographic(const LpProblem& p,
                                  std::span<const Vector> tie_objectives,
                                  const LpTolerances& tol) {
  LpSolution first = solve_lp(p, tol);
  if (first.status != LpStatus::kOptimal || tie_objectives.empty()) return first;
  const std::size_t m = p.num_rows(), n = p.num_vars();
  constexpr std::size_t kNoRow = static_cast<std::size_t>(-1);

  LpProblem work = p;
  // Original row behind each working row; kNoRow for column-fixing rows.
  std::vector<std::size_t> origin(m);
  for (std::size_t i = 0; i < m; ++i) origin[i] = i;
  std::vector<bool> pinned(m, false), col_fixed(n, false);
  LpSolution cur = first;
  std::size_t pivots = first.pivots;

  for (const Vector& next : tie_objectives) {
    if (next.size() != n) {
      throw Error(ErrorCode::kMalformedProblem, "tie objective has the wrong length");
    }
    // Restrict to the optimal face: rows with a positive multiplier stay
    // tight, nonnegative columns with a positive reduced cost stay at zero.
    double scale = 1.0;
    for (double v : work.c) scale = std::max(scale, std::abs(v));
    const double thr = 1e-9 * scale;
    const std::size_t rows_now = work.num_rows();
    const Vector grad = rows_now ? work.A.multiply_transposed(cur.duals) : Vector(n, 0.0);
    std::vector<std::size_t> fix_cols;
    for (std::size_t j = 0; j < n; ++j) {
      if (p.kinds[j] == VarKind::kNonNegative && !col_fixed[j] && work.c[j] + grad[j] > thr) {
        fix_cols.push_back(j);
      }
    }
    for (std::size_t k = 0; k < rows_now; ++k) {
      const std::size_t o = origin[k];
      if (o == kNoRow || pinned[o] || !(cur.duals[k] > thr)) continue;
      pinned[o] = true;
      Vector neg(p.A.row(o).begin(), p.A.row(o).end());
      for (double& v : neg) v = -v;
      work.A.append_row(neg);
      work.b.push_back(-p.b[o]);
      origin.push_back(o);
    }
    for (std::size_t j : fix_cols) {
      col_fixed[j] = true;
      Vector e(n, 0.0);
      e[j] = 1.0;
      work.A.append_row(e);
      work.b.push_back(0.0);
      origin.push_back(kNoRow);
    }
    work.c = next;
    LpSolution sol = solve_lp(work, tol);
    pivots += sol.pivots;
    // An unbounded tie objective leaves the previous vertex in place.
    if (sol.status != LpStatus::kOptimal) break;
    cur = std::move(sol);
  }

  LpSolution out;
  out.status = LpStatus::kOptimal;
  out.primal = cur.primal;
  out.objective = dot(p.c, out.primal);
  out.duals = first.duals;
  for (std::size_t k : cur.basis) {
    if (origin[k] != kNoRow) out.basis.push_back(origin[k]);
  }
  std::sort(out.basis.begin(), out.basis.end());
  out.basis.erase(std::unique(out.basis.begin(), out.basis.end()), out.basis.end());
  if (m > 0) {
    const Vector at = p.A.multiply(out.primal);
    for (std::size_t i = 0; i < m; ++i) {
      if (std::abs(p.b[i] - at[i]) <= tol.act) out.active_set.push_back(i);
    }
  }
  out.pivots = pivots;
  return out;
}

ActiveSetResult extract_active_set(const LpSolution& solution,
                                   std::span<const double> b_eff,
                                   const DenseMatrix& A, double act_tol) {
  ActiveSetResult out;
  if (solution.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kInvalidArgument,
                "extract_active_set needs an optimal solution");
  }
  const Vector at = A.rows() ? A.multiply(solution.primal) : Vector{};
  for (std::size_t i = 0; i < b_eff.size(); ++i) {
    if (std::abs(b_eff[i] - at[i]) <= act_tol) {
      out.rows.push_back(i);
      if (!(i < solution.duals.size() && solution.duals[i] > act_tol)) {
        out.strict = false;
      }
    }
  }
  return out;
}

KktReport check_kkt(const LpProblem& p, const LpSolution& s) {
  KktReport k;
  const std::size_t m = p.num_rows();
  const std::size_t n = p.num_vars();
  const Vector at = m ? p.A.multiply(s.primal) : Vector{};
  double dual_obj = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double slack = p.b[i] - at[i];
    k.primal_infeasibility = std::max(k.primal_infeasibility, -slack);
    k.dual_infeasibility = std::max(k.dual_infeasibility, -s.duals[i]);
    k.complementarity =
        std::max(k.complementarity, std::abs(s.duals[i] * slack));
    dual_obj -= p.b[i] * s.duals[i];
  }
  Vector grad = m ? p.A.multiply_transposed(s.duals) : Vector(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double g = p.c[j] + grad[j];
    const double err = p.kinds[j] == VarKind::kFree
                           ? std::abs(g)
                           : std::max(-g, std::abs(g * s.primal[j]));
    k.dual_infeasibility = std::max(k.dual_infeasibility, err);
  }
  k.duality_gap = std::abs(s.objective - dual_obj);
  return k;
}

}  // namespace prs
