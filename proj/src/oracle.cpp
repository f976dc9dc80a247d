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

#include "prs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <tuple>

#include "prs/errors.hpp"
#include "prs/simd/kernels.hpp"

namespace prs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  double F = kInf;
  double f = kInf;
  std::size_t index = std::numeric_limits<std::size_t>::max();
  Vector x, y;

  bool operator<(const Candidate& o) const {
    return std::tie(F, f, index) < std::tie(o.F, o.f, o.index);
  }
};

Vector grid_point(const Box& box, std::size_t resolution, std::size_t index) {
  const std::size_t n = box.dim();
  Vector x(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = index % resolution;
    index /= resolution;
    if (resolution == 1) {
      x[j] = 0.5 * (box.lo[j] + box.hi[j]);
    } else {
      x[j] = box.lo[j] + static_cast<double>(i) * (box.hi[j] - box.lo[j]) /
                             static_cast<double>(resolution - 1);
    }
  }
  return x;
}

Vector uniform_point(const Box& box, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(box.dim());
  for (std::size_t j = 0; j < x.size(); ++j) {
    x[j] = box.lo[j] + u(rng) * (box.hi[j] - box.lo[j]);
  }
  return x;
}

// Center and radius of the largest ball in E x <= g (rows of unit norm),
// radius capped at 1e3.
std::pair<Vector, double> chebyshev_center(const DenseMatrix& E, const Vector& g) {
  const std::size_t n = E.cols();
  LpProblem lp;
  lp.A = DenseMatrix(E.rows() + 1, n + 1);
  for (std::size_t r = 0; r < E.rows(); ++r) {
    for (std::size_t j = 0; j < n; ++j) lp.A(r, j) = E(r, j);
    lp.A(r, n) = 1.0;
  }
  lp.A(E.rows(), n) = 1.0;
  lp.b = g;
  lp.b.push_back(1e3);
  lp.c.assign(n + 1, 0.0);
  lp.c[n] = -1.0;
  lp.kinds.assign(n + 1, VarKind::kFree);
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) return {Vector(n, 0.0), 0.0};
  return {Vector(sol.primal.begin(), sol.primal.begin() + n),
          std::max(0.0, sol.primal[n])};
}

}  // namespace

Box uniform_box(std::size_t n, double lo, double hi) {
  return Box{Vector(n, lo), Vector(n, hi)};
}

std::optional<Box> upper_box(const BilevelInstance& inst) {
  const std::size_t n = inst.n_x();
  Box box{Vector(n, -kInf), Vector(n, kInf)};
  for (std::size_t i = 0; i < inst.m1(); ++i) {
    if (std::any_of(inst.B1.row(i).begin(), inst.B1.row(i).end(),
                    [](double v) { return v != 0.0; })) {
      continue;
    }
    std::size_t nz = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (inst.A1(i, j) != 0.0) {
        ++nz;
        col = j;
      }
    }
    if (nz != 1) continue;
    const double a = inst.A1(i, col), v = inst.b1[i] / a;
    if (a > 0) {
      box.hi[col] = std::min(box.hi[col], v);
    } else {
      box.lo[col] = std::max(box.lo[col], v);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(box.lo[j]) || !std::isfinite(box.hi[j])) return std::nullopt;
  }
  return box;
}

GridOracleResult grid_oracle(const BilevelInstance& inst, const Box& box,
                             std::size_t resolution, std::size_t threads,
                             double feas_tol) {
  require_valid(inst);
  const std::size_t n = inst.n_x();
  if (n > 3) {
    throw Error(ErrorCode::kDimensionTooLarge, "grid oracle supports n_x <= 3");
  }
  if (box.dim() != n || resolution == 0) {
    throw Error(ErrorCode::kInvalidArgument, "grid oracle: bad box or resolution");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(box.lo[j]) || !std::isfinite(box.hi[j]) || box.lo[j] > box.hi[j]) {
      throw Error(ErrorCode::kInvalidArgument, "grid oracle: box must be finite");
    }
  }
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j) total *= resolution;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, total);

  struct Partial {
    Candidate best;
    std::size_t feasible = 0;
  };
  std::vector<Partial> parts(threads);
  auto work = [&](std::size_t t) {
    Partial& p = parts[t];
    for (std::size_t idx = t; idx < total; idx += threads) {
      Vector x = grid_point(box, resolution, idx);
      // Upper-level binaries must sit on 0/1 to be candidates at all.
      bool integral = true;
      for (std::size_t j : inst.x_integer_indices) {
        if (x[j] != 0.0 && x[j] != 1.0) integral = false;
      }
      if (!integral) continue;
      FollowerResponse resp;
      try {
        resp = solve_follower(inst, x, 1e-9);
      } catch (const Error&) {
        continue;
      }
      if (inst.upper_violation(x, resp.y) > feas_tol) continue;
      ++p.feasible;
      Candidate c{inst.upper_objective(x, resp.y), resp.f, idx, {}, {}};
      if (c < p.best) {
        c.x = std::move(x);
        c.y = std::move(resp.y);
        p.best = std::move(c);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  GridOracleResult out;
  out.resolution = resolution;
  out.evaluated = total;
  out.box = box;
  Candidate best;
  for (auto& p : parts) {
    out.feasible += p.feasible;
    if (p.best < best) best = std::move(p.best);
  }
  if (std::isfinite(best.F)) out.best = BilevelPoint{best.x, best.y, best.F, best.f};
  return out;
}

RegionAtlas enumerate_regions(const BilevelInstance& inst,
                              const BinaryVector& y_I_fixed, const Box& box,
                              std::size_t sample_budget, std::uint64_t seed,
                              const RegionOptions& opts) {
  require_valid(inst);
  RegionAtlas atlas;
  atlas.y_I_fixed = y_I_fixed;
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < sample_budget; ++s) {
    const Vector x = uniform_point(box, rng);
    const bool covered = std::any_of(
        atlas.regions.begin(), atlas.regions.end(),
        [&](const CriticalRegion& r) { return contains(r, x, y_I_fixed, opts.memb_tol); });
    if (covered) {
      ++atlas.coverage_samples;
      continue;
    }
    try {
      const ActiveSetInfo info = identify_active_set(inst, y_I_fixed, x, opts);
      const bool known = std::any_of(
          atlas.regions.begin(), atlas.regions.end(),
          [&](const CriticalRegion& r) { return r.active_rows == info.active_rows; });
      if (known) {
        atlas.uncovered.push_back(x);
        continue;
      }
      CriticalRegion reg =
          build_critical_region(inst, info, affine_response(inst, info), x, opts);
      reg.id = atlas.regions.size();
      atlas.regions.push_back(std::move(reg));
      ++atlas.coverage_samples;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kLowerLevelInfeasible) {
        ++atlas.infeasible_samples;
      } else {
        atlas.uncovered.push_back(x);
      }
    }
  }
  return atlas;
}

RegionSampleReport resample_region(const BilevelInstance& inst,
                                   const CriticalRegion& region,
                                   const RegionSampleOptions& opts) {
  RegionSampleReport rep;
  const std::size_t n = inst.n_x();
  Vector g = region.f;
  for (double& v : g) v -= opts.margin;
  auto [center, radius] = chebyshev_center(region.E, g);
  rep.inner_radius = radius;
  if (radius <= 1e-9) return rep;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& kt = simd::kernels();

  Vector x = center;
  auto step = [&] {
    Vector d(n);
    for (double& v : d) v = normal(rng);
    const double nd = norm2(d);
    if (nd == 0.0) return;
    for (double& v : d) v /= nd;
    double lo = -1e3, hi = 1e3;
    for (std::size_t r = 0; r < region.E.rows(); ++r) {
      const double a = kt.dot(region.E.row(r).data(), d.data(), n);
      const double s = g[r] - kt.dot(region.E.row(r).data(), x.data(), n);
      if (a > 1e-14) {
        hi = std::min(hi, s / a);
      } else if (a < -1e-14) {
        lo = std::max(lo, s / a);
      }
    }
    if (!(hi > lo)) return;
    const double t = lo + unit(rng) * (hi - lo);
    for (std::size_t j = 0; j < n; ++j) x[j] += t * d[j];
  };
  const std::size_t burn = 20 * n + 50, thin = n + 2;
  for (std::size_t i = 0; i < burn; ++i) step();

  std::vector<std::size_t> expected = region.active_rows;
  while (rep.samples < opts.samples) {
    for (std::size_t i = 0; i < thin; ++i) step();
    ++rep.samples;
    const LpProblem lp = continuous_follower_lp(inst, region.y_I_fixed, x);
    const LpSolution sol = solve_continuous_follower(inst, region.y_I_fixed, x);
    if (sol.status != LpStatus::kOptimal) {
      ++rep.lp_failures;
      continue;
    }
    std::vector<std::size_t> tight;
    const Vector ay = lp.A.multiply(sol.primal);
    for (std::size_t i = 0; i < lp.b.size(); ++i) {
      if (std::abs(lp.b[i] - ay[i]) <= 1e-9 * (1.0 + std::abs(lp.b[i]))) {
        tight.push_back(i);
      }
    }
    if (tight != expected) ++rep.active_set_mismatches;

    const Vector yk = region.K.multiply(x);
    double err = 0.0;
    for (std::size_t k = 0; k < yk.size(); ++k) {
      err = std::max(err, std::abs(yk[k] + region.h[k] - sol.primal[k]));
    }
    rep.max_response_error = std::max(rep.max_response_error, err);
    if (err > opts.response_tol) ++rep.response_mismatches;

    double derr = 0.0;
    for (std::size_t i = 0; i < sol.duals.size(); ++i) {
      derr = std::max(derr, std::abs(sol.duals[i] - region.duals[i]));
    }
    rep.max_dual_error = std::max(rep.max_dual_error, derr);
    if (derr > opts.dual_tol) ++rep.dual_mismatches;
  }
  return rep;
}

CrossCheckReport cross_check_prs(const BilevelInstance& inst,
                                 const PrsResult& prs_result,
                                 const GridOracleResult& grid, double slack,
                                 double feas_tol) {
  CrossCheckReport rep;
  if (prs_result.best) {
    const BilevelPoint& b = *prs_result.best;
    try {
      rep.prs_feasible = check_bilevel_feasible(inst, b.x, b.y, feas_tol).feasible;
    } catch (const Error&) {
      rep.prs_feasible = false;
    }
    if (grid.best) {
      rep.delta_F = b.F - grid.best->F;
      rep.within_slack = *rep.delta_F <= slack;
    }
  }
  return rep;
}

}  // namespace prs
