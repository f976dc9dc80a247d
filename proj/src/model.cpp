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

#include "prs/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prs/errors.hpp"

namespace prs {
namespace {

std::vector<std::size_t> complement(std::size_t n,
                                    const std::vector<std::size_t>& idx) {
  std::vector<bool> in(n, false);
  for (std::size_t i : idx) {
    if (i < n) in[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!in[i]) out.push_back(i);
  }
  return out;
}

double block_violation(const DenseMatrix& A, const DenseMatrix& B,
                       std::span<const double> b, std::span<const double> x,
                       std::span<const double> y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double lhs = 0.0;
    if (A.cols() > 0) lhs += dot(A.row(i), x);
    if (B.cols() > 0) lhs += dot(B.row(i), y);
    worst = std::max(worst, lhs - b[i]);
  }
  return worst;
}

void check_vector(std::vector<std::string>& out, const char* name,
                  const Vector& v, std::size_t expect) {
  if (v.size() != expect) {
    std::ostringstream os;
    os << name << ": length " << v.size() << ", expected " << expect;
    out.push_back(os.str());
  }
  if (!all_finite(v)) out.push_back(std::string(name) + ": non-finite entry");
}

void check_matrix(std::vector<std::string>& out, const char* name,
                  const DenseMatrix& m, std::size_t rows, std::size_t cols) {
  const bool cols_ok = m.cols() == cols || (m.rows() == 0 && rows == 0);
  if (m.rows() != rows || !cols_ok) {
    std::ostringstream os;
    os << name << ": shape " << m.rows() << "x" << m.cols() << ", expected "
       << rows << "x" << cols;
    out.push_back(os.str());
  }
  if (!m.all_finite()) out.push_back(std::string(name) + ": non-finite entry");
}

void check_indices(std::vector<std::string>& out, const char* name,
                   const std::vector<std::size_t>& idx, std::size_t count,
                   std::size_t range) {
  if (idx.size() != count) {
    std::ostringstream os;
    os << name << ": " << idx.size() << " indices, expected " << count;
    out.push_back(os.str());
  }
  std::vector<bool> seen(range, false);
  for (std::size_t i : idx) {
    if (i >= range) {
      out.push_back(std::string(name) + ": index " + std::to_string(i) +
                    " out of range");
    } else if (seen[i]) {
      out.push_back(std::string(name) + ": index " + std::to_string(i) +
                    " repeated");
    } else {
      seen[i] = true;
    }
  }
}

}  // namespace

std::vector<std::size_t> BilevelInstance::x_continuous_indices() const {
  return complement(n_x(), x_integer_indices);
}

std::vector<std::size_t> BilevelInstance::y_continuous_indices() const {
  return complement(n_y(), y_integer_indices);
}

double BilevelInstance::upper_objective(std::span<const double> x,
                                        std::span<const double> y) const {
  return dot(c1, x) + dot(d1, y);
}

double BilevelInstance::lower_objective(std::span<const double> x,
                                        std::span<const double> y) const {
  return dot(c2, x) + dot(d2, y);
}

double BilevelInstance::upper_violation(std::span<const double> x,
                                        std::span<const double> y) const {
  return block_violation(A1, B1, b1, x, y);
}

double BilevelInstance::lower_violation(std::span<const double> x,
                                        std::span<const double> y) const {
  return block_violation(A2, B2, b2, x, y);
}

BilevelPoint make_point(const BilevelInstance& inst, Vector x, Vector y) {
  BilevelPoint p;
  p.F = inst.upper_objective(x, y);
  p.f = inst.lower_objective(x, y);
  p.x = std::move(x);
  p.y = std::move(y);
  return p;
}

std::vector<std::string> validate(const BilevelInstance& inst) {
  std::vector<std::string> out;
  const std::size_t nx = inst.n_x(), ny = inst.n_y();
  const std::size_t m1 = inst.m1(), m2 = inst.m2();
  check_vector(out, "c1", inst.c1, nx);
  check_vector(out, "d1", inst.d1, ny);
  check_matrix(out, "A1", inst.A1, m1, nx);
  check_matrix(out, "B1", inst.B1, m1, ny);
  if (!all_finite(inst.b1)) out.push_back("b1: non-finite entry");
  check_vector(out, "c2", inst.c2, nx);
  check_vector(out, "d2", inst.d2, ny);
  check_matrix(out, "A2", inst.A2, m2, nx);
  check_matrix(out, "B2", inst.B2, m2, ny);
  if (!all_finite(inst.b2)) out.push_back("b2: non-finite entry");
  check_indices(out, "x_integer_indices", inst.x_integer_indices, inst.n_xI, nx);
  check_indices(out, "y_integer_indices", inst.y_integer_indices, inst.n_yI, ny);
  return out;
}

void require_valid(const BilevelInstance& inst) {
  const auto v = validate(inst);
  if (v.empty()) return;
  std::string msg = "invalid bilevel instance:";
  for (const auto& s : v) msg += " [" + s + "]";
  throw Error(ErrorCode::kMalformedProblem, msg);
}

Vector ExpansionResult::recover_x(std::span<const double> xe) const {
  Vector out = x_shift;
  for (std::size_t i = 0; i < x_map.size(); ++i) {
    for (const auto& [col, w] : x_map[i]) out[i] += w * xe[col];
  }
  return out;
}

Vector ExpansionResult::recover_y(std::span<const double> ye) const {
  Vector out = y_shift;
  for (std::size_t i = 0; i < y_map.size(); ++i) {
    for (const auto& [col, w] : y_map[i]) out[i] += w * ye[col];
  }
  return out;
}

namespace {

struct SideExpansion {
  std::vector<std::vector<std::pair<std::size_t, double>>> map;
  Vector shift;
  std::vector<std::size_t> binaries;
  std::size_t width = 0;
  // (columns, weights, range) for rows that cap the binary sum.
  struct RangeRow {
    std::vector<std::pair<std::size_t, double>> terms;
    double range;
  };
  std::vector<RangeRow> range_rows;
};

SideExpansion expand_side(std::size_t n,
                          const std::vector<std::size_t>& integer_idx,
                          const std::map<std::size_t, IntegerBounds>& bounds,
                          const char* side) {
  std::vector<bool> is_int(n, false);
  for (std::size_t i : integer_idx) is_int[i] = true;
  for (const auto& [i, b] : bounds) {
    if (i >= n || !is_int[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(side) + std::to_string(i) +
                      " has bounds but is not an integer variable");
    }
  }
  SideExpansion s;
  s.map.resize(n);
  s.shift.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = bounds.find(i);
    if (!is_int[i] || it == bounds.end()) {
      if (is_int[i]) s.binaries.push_back(s.width);
      s.map[i].push_back({s.width++, 1.0});
      continue;
    }
    const IntegerBounds b = it->second;
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi ||
        b.lo != std::floor(b.lo) || b.hi != std::floor(b.hi)) {
      throw Error(ErrorCode::kUnboundedInteger,
                  std::string(side) + std::to_string(i) +
                      " needs finite integral bounds lo <= hi");
    }
    s.shift[i] = b.lo;
    const double range = b.hi - b.lo;
    std::size_t k = 0;
    double cap = 0.0;  // 2^k - 1
    while (cap < range) {
      ++k;
      cap = 2.0 * cap + 1.0;
    }
    SideExpansion::RangeRow row{{}, range};
    double w = 1.0;
    for (std::size_t q = 0; q < k; ++q, w *= 2.0) {
      s.binaries.push_back(s.width);
      s.map[i].push_back({s.width, w});
      row.terms.push_back({s.width, w});
      ++s.width;
    }
    if (cap > range) s.range_rows.push_back(std::move(row));
  }
  return s;
}

// Columns of `m` redistributed onto the expanded layout.
DenseMatrix expand_columns(const DenseMatrix& m, const SideExpansion& s) {
  DenseMatrix out(m.rows(), s.width);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t i = 0; i < s.map.size(); ++i) {
      for (const auto& [col, w] : s.map[i]) out(r, col) = m(r, i) * w;
    }
  }
  return out;
}

Vector expand_vector(const Vector& v, const SideExpansion& s) {
  Vector out(s.width, 0.0);
  for (std::size_t i = 0; i < s.map.size(); ++i) {
    for (const auto& [col, w] : s.map[i]) out[col] = v[i] * w;
  }
  return out;
}

}  // namespace

ExpansionResult expand_integers_to_binary(
    const BilevelInstance& inst,
    const std::map<std::size_t, IntegerBounds>& x_bounds,
    const std::map<std::size_t, IntegerBounds>& y_bounds) {
  require_valid(inst);
  const SideExpansion sx =
      expand_side(inst.n_x(), inst.x_integer_indices, x_bounds, "x");
  const SideExpansion sy =
      expand_side(inst.n_y(), inst.y_integer_indices, y_bounds, "y");

  ExpansionResult r;
  BilevelInstance& e = r.instance;
  e.n_xC = inst.n_xC;
  e.n_yC = inst.n_yC;
  e.n_xI = sx.binaries.size();
  e.n_yI = sy.binaries.size();
  e.x_integer_indices = sx.binaries;
  e.y_integer_indices = sy.binaries;
  e.c1 = expand_vector(inst.c1, sx);
  e.d1 = expand_vector(inst.d1, sy);
  e.c2 = expand_vector(inst.c2, sx);
  e.d2 = expand_vector(inst.d2, sy);
  e.A1 = expand_columns(inst.A1, sx);
  e.B1 = expand_columns(inst.B1, sy);
  e.A2 = expand_columns(inst.A2, sx);
  e.B2 = expand_columns(inst.B2, sy);
  e.b1 = inst.b1;
  e.b2 = inst.b2;
  if (inst.m1() > 0) {
    const Vector s = inst.A1.multiply(sx.shift);
    const Vector t = inst.B1.multiply(sy.shift);
    for (std::size_t i = 0; i < e.b1.size(); ++i) e.b1[i] -= s[i] + t[i];
  }
  if (inst.m2() > 0) {
    const Vector s = inst.A2.multiply(sx.shift);
    const Vector t = inst.B2.multiply(sy.shift);
    for (std::size_t i = 0; i < e.b2.size(); ++i) e.b2[i] -= s[i] + t[i];
  }
  // Range rows: x variables belong to the leader, y variables to the follower.
  for (const auto& rr : sx.range_rows) {
    Vector a(sx.width, 0.0);
    for (const auto& [col, w] : rr.terms) a[col] = w;
    if (e.A1.rows() == 0) e.A1 = DenseMatrix(0, sx.width);
    if (e.B1.rows() == 0) e.B1 = DenseMatrix(0, sy.width);
    e.A1.append_row(a);
    e.B1.append_row(Vector(sy.width, 0.0));
    e.b1.push_back(rr.range);
  }
  for (const auto& rr : sy.range_rows) {
    Vector a(sy.width, 0.0);
    for (const auto& [col, w] : rr.terms) a[col] = w;
    if (e.A2.rows() == 0) e.A2 = DenseMatrix(0, sx.width);
    if (e.B2.rows() == 0) e.B2 = DenseMatrix(0, sy.width);
    e.B2.append_row(a);
    e.A2.append_row(Vector(sx.width, 0.0));
    e.b2.push_back(rr.range);
  }
  r.upper_offset = dot(inst.c1, sx.shift) + dot(inst.d1, sy.shift);
  r.lower_offset = dot(inst.c2, sx.shift) + dot(inst.d2, sy.shift);
  r.x_map = sx.map;
  r.y_map = sy.map;
  r.x_shift = sx.shift;
  r.y_shift = sy.shift;
  return r;
}

LowerLevelProblem lower_level_milp(const BilevelInstance& inst,
                                   std::span<const double> x_hat) {
  if (x_hat.size() != inst.n_x()) {
    throw Error(ErrorCode::kInvalidArgument, "lower_level_milp: |x| != n_x");
  }
  LowerLevelProblem out;
  LpProblem& lp = out.milp.base;
  lp.c = inst.d2;
  lp.A = inst.B2;
  if (lp.A.rows() == 0) lp.A = DenseMatrix(0, inst.n_y());
  lp.b = inst.b2;
  if (inst.m2() > 0) {
    const Vector ax = inst.A2.multiply(x_hat);
    for (std::size_t i = 0; i < lp.b.size(); ++i) lp.b[i] -= ax[i];
  }
  lp.kinds.assign(inst.n_y(), VarKind::kFree);
  for (std::size_t j : inst.y_integer_indices) lp.kinds[j] = VarKind::kNonNegative;
  out.milp.binary_indices = inst.y_integer_indices;
  out.constant = dot(inst.c2, x_hat);
  return out;
}

namespace {

MilpSolution solve_lower(const MilpProblem& p, double rel_gap) {
  MilpOptions opts;
  opts.rel_gap = rel_gap;
  const MilpSolution sol = solve_milp(p, opts);
  if (sol.status == MilpStatus::kInfeasible) {
    throw Error(ErrorCode::kLowerLevelInfeasible,
                "no follower response at the given leader decision");
  }
  if (sol.status == MilpStatus::kUnbounded) {
    throw Error(ErrorCode::kUnboundedLowerLevel,
                "follower problem unbounded at the given leader decision");
  }
  return sol;
}

}  // namespace

std::vector<Vector> follower_tie_objectives(const BilevelInstance& inst) {
  const auto yc = inst.y_continuous_indices();
  Vector lead, generic;
  for (std::size_t k = 0; k < yc.size(); ++k) {
    lead.push_back(inst.d1[yc[k]]);
    // Fractional parts of multiples of the golden ratio, shifted off zero.
    const double g = 0.6180339887498949 * double(k + 1);
    generic.push_back(1.0 + (g - std::floor(g)));
  }
  return {lead, generic};
}

FollowerResponse solve_follower(const BilevelInstance& inst,
                                std::span<const double> x, double rel_gap) {
  const LowerLevelProblem ll = lower_level_milp(inst, x);
  MilpSolution sol = solve_lower(ll.milp, rel_gap);
  if (!inst.y_integer_indices.empty()) {
    // Least leader cost among follower optima.
    MilpProblem opt = ll.milp;
    opt.base.c = inst.d1;
    opt.base.A.append_row(inst.d2);
    opt.base.b.push_back(sol.objective + 1e-9 * (1.0 + std::abs(sol.objective)));
    MilpOptions o;
    o.rel_gap = rel_gap;
    MilpSolution alt = solve_milp(opt, o);
    if (alt.status == MilpStatus::kOptimal) sol = std::move(alt);
  }
  Vector y = sol.primal;
  if (inst.n_yC > 0) {
    Vector bins;
    for (std::size_t j : inst.y_integer_indices) bins.push_back(std::round(y[j]));
    double constant = 0.0;
    const LpProblem lp = fix_binaries(ll.milp, bins, constant);
    const LpSolution cont =
        solve_lp_lexicographic(lp, follower_tie_objectives(inst));
    if (cont.status == LpStatus::kOptimal) {
      const auto yc = inst.y_continuous_indices();
      for (std::size_t k = 0; k < yc.size(); ++k) y[yc[k]] = cont.primal[k];
      for (std::size_t k = 0; k < bins.size(); ++k) y[inst.y_integer_indices[k]] = bins[k];
    }
  }
  FollowerResponse r;
  r.f = ll.constant + dot(inst.d2, y);
  r.y = std::move(y);
  return r;
}

double follower_value(const BilevelInstance& inst, std::span<const double> x,
                      double rel_gap) {
  const LowerLevelProblem ll = lower_level_milp(inst, x);
  return ll.constant + solve_lower(ll.milp, rel_gap).objective;
}

FeasibilityReport check_bilevel_feasible(const BilevelInstance& inst,
                                         std::span<const double> x,
                                         std::span<const double> y, double tol,
                                         double rel_gap) {
  FeasibilityReport rep;
  rep.upper_violation = inst.upper_violation(x, y);
  rep.lower_violation = inst.lower_violation(x, y);
  for (std::size_t j : inst.y_integer_indices) {
    if (std::min(std::abs(y[j]), std::abs(1.0 - y[j])) > 1e-6) rep.integral = false;
  }
  for (std::size_t j : inst.x_integer_indices) {
    if (std::min(std::abs(x[j]), std::abs(1.0 - x[j])) > 1e-6) rep.integral = false;
  }
  rep.follower_optimum = follower_value(inst, x, rel_gap) - dot(inst.c2, x);
  rep.follower_gap = dot(inst.d2, y) - rep.follower_optimum;
  rep.feasible = rep.upper_violation <= tol && rep.lower_violation <= tol &&
                 rep.integral && rep.follower_gap <= tol;
  return rep;
}

}  // namespace prs
