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

#include "prs/cregion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prs/errors.hpp"
#include "prs/simd/kernels.hpp"

namespace prs {
namespace {

void check_binaries(const BilevelInstance& inst, const BinaryVector& y_I) {
  if (y_I.size() != inst.y_integer_indices.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "binary assignment has the wrong length");
  }
  for (int v : y_I) {
    if (v != 0 && v != 1) {
      throw Error(ErrorCode::kInvalidArgument, "binary assignment must be 0/1");
    }
  }
}

}  // namespace

LpProblem continuous_follower_lp(const BilevelInstance& inst,
                                 const BinaryVector& y_I,
                                 std::span<const double> x) {
  const auto yc = inst.y_continuous_indices();
  LpProblem lp;
  lp.A = inst.B2.select_cols(yc);
  lp.b = inst.b2;
  const Vector ax = inst.A2.multiply(x);
  for (std::size_t i = 0; i < inst.m2(); ++i) {
    double r = inst.b2[i] - ax[i];
    for (std::size_t k = 0; k < inst.y_integer_indices.size(); ++k) {
      r -= inst.B2(i, inst.y_integer_indices[k]) * y_I[k];
    }
    lp.b[i] = r;
  }
  lp.c.reserve(yc.size());
  for (std::size_t j : yc) lp.c.push_back(inst.d2[j]);
  lp.kinds.assign(yc.size(), VarKind::kFree);
  return lp;
}

LpSolution solve_continuous_follower(const BilevelInstance& inst,
                                     const BinaryVector& y_I,
                                     std::span<const double> x,
                                     const LpTolerances& tol) {
  return solve_lp_lexicographic(continuous_follower_lp(inst, y_I, x),
                                follower_tie_objectives(inst), tol);
}

BinaryVector binary_part(const BilevelInstance& inst, std::span<const double> y) {
  BinaryVector out;
  out.reserve(inst.y_integer_indices.size());
  for (std::size_t j : inst.y_integer_indices) {
    out.push_back(y[j] > 0.5 ? 1 : 0);
  }
  return out;
}

ActiveSetInfo identify_active_set(const BilevelInstance& inst,
                                  const BinaryVector& y_I_fixed,
                                  std::span<const double> x0,
                                  const RegionOptions& opts) {
  check_binaries(inst, y_I_fixed);
  const LpProblem lp = continuous_follower_lp(inst, y_I_fixed, x0);
  const LpSolution sol = solve_lp_lexicographic(lp, follower_tie_objectives(inst), opts.lp_tol);
  if (sol.status == LpStatus::kInfeasible) {
    throw Error(ErrorCode::kLowerLevelInfeasible,
                "follower LP is infeasible at the generator point");
  }
  if (sol.status == LpStatus::kUnbounded) {
    throw Error(ErrorCode::kUnboundedLowerLevel,
                "follower LP is unbounded at the generator point");
  }

  const std::size_t n = inst.n_yC;
  ActiveSetInfo info;
  info.y_I_fixed = y_I_fixed;
  info.y_C = sol.primal;
  const ActiveSetResult tight =
      extract_active_set(sol, lp.b, lp.A, opts.act_tol);
  info.degenerate = tight.rows.size() > n;

  // Multipliers of each objective stage on basis `rows`; the basis is
  // optimal for the lexicographic objective wherever it is primal feasible
  // iff every row's multipliers are lexicographically nonnegative.
  std::vector<Vector> stages = follower_tie_objectives(inst);
  stages.insert(stages.begin(), lp.c);
  auto lex_feasible = [&](const std::vector<std::size_t>& rows) {
    const DenseMatrix bm = lp.A.select_rows(rows);
    if (rank(bm) < n) return false;
    DenseMatrix bt(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) bt(i, j) = bm(j, i);
    }
    std::vector<Vector> mu;
    for (const Vector& c : stages) {
      Vector rhs(n);
      double scale = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        rhs[j] = -c[j];
        scale = std::max(scale, std::abs(c[j]));
      }
      Vector m = solve_square(bt, rhs);
      for (double& v : m) {
        if (std::abs(v) <= 1e-9 * scale) v = 0.0;
      }
      mu.push_back(std::move(m));
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (const Vector& m : mu) {
        if (m[k] > 0.0) break;
        if (m[k] < 0.0) return false;
      }
    }
    return true;
  };

  std::vector<std::size_t> chosen;
  if (n > 0 && tight.rows.size() > n) {
    // Degenerate vertex: the first lexicographically optimal basis among
    // the tight rows, trying the solver's own basis first.
    try {
      if (sol.basis.size() == n && lex_feasible(sol.basis)) chosen = sol.basis;
    } catch (const Error&) {
    }
    const std::size_t t = tight.rows.size();
    std::vector<std::size_t> pick(n);
    for (std::size_t k = 0; k < n; ++k) pick[k] = k;
    for (std::size_t tries = 0; chosen.empty() && tries < 20000; ++tries) {
      std::vector<std::size_t> rows(n);
      for (std::size_t k = 0; k < n; ++k) rows[k] = tight.rows[pick[k]];
      try {
        if (lex_feasible(rows)) chosen = rows;
      } catch (const Error&) {
      }
      // Next n-subset of the tight rows in lexicographic order.
      std::size_t k = n;
      while (k > 0 && pick[k - 1] == t - n + k - 1) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t q = k; q < n; ++q) pick[q] = pick[q - 1] + 1;
    }
  }
  auto try_add = [&](std::size_t r) {
    if (chosen.size() >= n) return;
    std::vector<std::size_t> trial = chosen;
    trial.push_back(r);
    if (rank(lp.A.select_rows(trial)) == trial.size()) chosen = std::move(trial);
  };
  for (std::size_t r : sol.basis) try_add(r);
  if (chosen.size() < n) {
    std::vector<std::size_t> rest;
    for (std::size_t r : tight.rows) {
      if (std::find(chosen.begin(), chosen.end(), r) == chosen.end()) rest.push_back(r);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
      return sol.duals[a] > sol.duals[b];
    });
    for (std::size_t r : rest) try_add(r);
  }
  if (chosen.size() < n) {
    throw Error(ErrorCode::kSingularBasis,
                "tight follower rows do not determine y_C uniquely");
  }
  std::sort(chosen.begin(), chosen.end());
  info.active_rows = chosen;
  info.basis_matrix = lp.A.select_rows(chosen);
  if (condition_number(info.basis_matrix) >= opts.cond_max) {
    throw Error(ErrorCode::kSingularBasis, "active basis is ill-conditioned");
  }

  // B_A^T lambda_A = -d2C.
  info.duals.assign(inst.m2(), 0.0);
  if (n > 0) {
    DenseMatrix bt(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) bt(i, j) = info.basis_matrix(j, i);
    }
    Vector rhs(lp.c.size());
    for (std::size_t j = 0; j < n; ++j) rhs[j] = -lp.c[j];
    const Vector lam = solve_square(bt, rhs);
    for (std::size_t k = 0; k < n; ++k) {
      info.duals[chosen[k]] = lam[k];
      if (!(lam[k] > opts.act_tol)) info.strict = false;
    }
  }
  return info;
}

AffineMap affine_response(const BilevelInstance& inst, const ActiveSetInfo& info) {
  const std::size_t n = inst.n_yC, nx = inst.n_x();
  AffineMap map;
  map.K = DenseMatrix(n, nx);
  map.h.assign(n, 0.0);
  if (n == 0) return map;
  const DenseMatrix inv = inverse(info.basis_matrix);
  Vector rhs(n);
  DenseMatrix a(n, nx);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = info.active_rows[k];
    double v = inst.b2[r];
    for (std::size_t q = 0; q < inst.y_integer_indices.size(); ++q) {
      v -= inst.B2(r, inst.y_integer_indices[q]) * info.y_I_fixed[q];
    }
    rhs[k] = v;
    for (std::size_t j = 0; j < nx; ++j) a(k, j) = inst.A2(r, j);
  }
  const DenseMatrix inv_a = inv.multiply(a);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nx; ++j) map.K(i, j) = -inv_a(i, j);
  }
  map.h = inv.multiply(rhs);
  return map;
}

Vector CriticalRegion::response(const BilevelInstance& inst,
                                std::span<const double> x) const {
  Vector y(inst.n_y(), 0.0);
  const Vector yc = K.multiply(x);
  const auto cidx = inst.y_continuous_indices();
  for (std::size_t k = 0; k < cidx.size(); ++k) y[cidx[k]] = yc[k] + h[k];
  for (std::size_t k = 0; k < inst.y_integer_indices.size(); ++k) {
    y[inst.y_integer_indices[k]] = y_I_fixed[k];
  }
  return y;
}

bool normalize_halfspaces(DenseMatrix& E, Vector& f, double zero_row_tol,
                          double memb_tol) {
  DenseMatrix out(0, E.cols());
  Vector g;
  bool ok = true;
  for (std::size_t r = 0; r < E.rows(); ++r) {
    const double nrm = norm2(E.row(r));
    if (nrm < zero_row_tol) {
      if (f[r] < -memb_tol) ok = false;
      continue;
    }
    Vector row(E.row(r).begin(), E.row(r).end());
    for (double& v : row) v /= nrm;
    out.append_row(row);
    g.push_back(f[r] / nrm);
  }
  E = std::move(out);
  f = std::move(g);
  return ok;
}

void remove_redundant_rows(DenseMatrix& E, Vector& f, const LpTolerances& tol) {
  const std::size_t nx = E.cols();
  std::vector<bool> keep(E.rows(), true);
  for (std::size_t r = 0; r < E.rows(); ++r) {
    // max E_r x over the other kept rows, capped by E_r x <= f_r + 1 so the
    // LP stays bounded.
    LpProblem lp;
    lp.A = DenseMatrix(0, nx);
    for (std::size_t q = 0; q < E.rows(); ++q) {
      if (q == r || !keep[q]) continue;
      lp.A.append_row(E.row(q));
      lp.b.push_back(f[q]);
    }
    lp.A.append_row(E.row(r));
    lp.b.push_back(f[r] + 1.0);
    lp.c.resize(nx);
    for (std::size_t j = 0; j < nx; ++j) lp.c[j] = -E(r, j);
    lp.kinds.assign(nx, VarKind::kFree);
    const LpSolution sol = solve_lp(lp, tol);
    if (sol.status == LpStatus::kOptimal && -sol.objective <= f[r] + 1e-9) {
      keep[r] = false;
    }
  }
  DenseMatrix out(0, nx);
  Vector g;
  for (std::size_t r = 0; r < E.rows(); ++r) {
    if (!keep[r]) continue;
    out.append_row(E.row(r));
    g.push_back(f[r]);
  }
  E = std::move(out);
  f = std::move(g);
}

CriticalRegion build_critical_region(const BilevelInstance& inst,
                                     const ActiveSetInfo& info,
                                     const AffineMap& map,
                                     std::span<const double> x0,
                                     const RegionOptions& opts) {
  const std::size_t nx = inst.n_x();
  const auto yc = inst.y_continuous_indices();
  const auto& yi = inst.y_integer_indices;

  DenseMatrix E(0, nx);
  Vector f;
  // Row a x + bC y_C + bI y_I <= rhs becomes (a + bC K) x <= rhs - bC h - bI y_I.
  auto add_row = [&](std::span<const double> a, std::span<const double> b,
                     double rhs) {
    Vector coef(a.begin(), a.end());
    for (std::size_t k = 0; k < yc.size(); ++k) {
      const double bk = b[yc[k]];
      if (bk == 0.0) continue;
      simd::axpy(bk, map.K.row(k), coef);
      rhs -= bk * map.h[k];
    }
    for (std::size_t q = 0; q < yi.size(); ++q) rhs -= b[yi[q]] * info.y_I_fixed[q];
    E.append_row(coef);
    f.push_back(rhs);
  };
  for (std::size_t i = 0; i < inst.m2(); ++i) {
    if (std::binary_search(info.active_rows.begin(), info.active_rows.end(), i)) {
      continue;
    }
    add_row(inst.A2.row(i), inst.B2.row(i), inst.b2[i]);
  }
  for (std::size_t j = 0; j < inst.m1(); ++j) {
    add_row(inst.A1.row(j), inst.B1.row(j), inst.b1[j]);
  }

  if (!normalize_halfspaces(E, f, opts.zero_row_tol, opts.memb_tol)) {
    throw Error(ErrorCode::kEmptyRegion, "a constant region row is violated");
  }
  if (E.rows() > 0 &&
      simd::kernels().max_excess(E.entries().data(), x0.data(), f.data(),
                                 E.rows(), nx) > opts.memb_tol) {
    throw Error(ErrorCode::kEmptyRegion,
                "generator point lies outside its own region");
  }
  if (opts.eliminate_redundant) remove_redundant_rows(E, f, opts.lp_tol);

  CriticalRegion reg;
  reg.y_I_fixed = info.y_I_fixed;
  reg.active_rows = info.active_rows;
  reg.K = map.K;
  reg.h = map.h;
  reg.E = std::move(E);
  reg.f = std::move(f);
  reg.generator_x.assign(x0.begin(), x0.end());
  reg.duals = info.duals;
  reg.strict = info.strict;
  reg.degenerate = info.degenerate;
  return reg;
}

CriticalRegion make_region(const BilevelInstance& inst,
                           const BinaryVector& y_I_fixed,
                           std::span<const double> x0,
                           const RegionOptions& opts) {
  const ActiveSetInfo info = identify_active_set(inst, y_I_fixed, x0, opts);
  return build_critical_region(inst, info, affine_response(inst, info), x0, opts);
}

bool contains(const CriticalRegion& region, std::span<const double> x,
              const BinaryVector& y_I_current, double memb_tol) {
  if (y_I_current != region.y_I_fixed) return false;
  if (region.E.rows() == 0) return true;
  return simd::kernels().max_excess(region.E.entries().data(), x.data(),
                                    region.f.data(), region.E.rows(),
                                    region.E.cols()) <= memb_tol;
}

}  // namespace prs
