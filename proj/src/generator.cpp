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

#include "prs/generator.hpp"

#include <algorithm>
#include <cctype>

#include "prs/errors.hpp"
#include "prs/hpr.hpp"

namespace prs {
namespace {

// Uniform on {-100, ..., 100} / 10. Modulo bias over 2^64 is negligible and
// keeps the stream identical across standard libraries.
double coefficient(std::mt19937_64& rng) {
  return static_cast<double>(static_cast<long long>(rng() % 201) - 100) / 10.0;
}

bool keep(std::mt19937_64& rng, double density) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < density;
}

double sparse(std::mt19937_64& rng, double density) {
  const double v = coefficient(rng);
  return keep(rng, density) ? v : 0.0;
}

}  // namespace

SizeSpec size_preset(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  SizeSpec s;
  s.name = key;
  if (key == "tiny") {
    s.n_xC = 5, s.n_yC = 3, s.n_yI = 2, s.m2 = 3;
  } else if (key == "small") {
    s.n_xC = 10, s.n_yC = 5, s.n_yI = 5, s.m2 = 3;
  } else if (key == "mid") {
    s.n_xC = 20, s.n_yC = 10, s.n_yI = 10, s.m2 = 5;
  } else if (key == "large") {
    s.n_xC = 50, s.n_yC = 25, s.n_yI = 25, s.m2 = 10;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown size preset: " + key);
  }
  return s;
}

BilevelInstance draw_instance(const SizeSpec& spec, std::mt19937_64& rng) {
  BilevelInstance inst;
  inst.n_xC = spec.n_xC;
  inst.n_xI = spec.n_xI;
  inst.n_yC = spec.n_yC;
  inst.n_yI = spec.n_yI;
  const std::size_t nx = inst.n_x(), ny = inst.n_y();
  for (std::size_t j = spec.n_xC; j < nx; ++j) inst.x_integer_indices.push_back(j);
  for (std::size_t j = spec.n_yC; j < ny; ++j) inst.y_integer_indices.push_back(j);

  auto draw_vec = [&](std::size_t n) {
    Vector v(n);
    for (double& e : v) e = sparse(rng, spec.density);
    return v;
  };
  inst.c1 = draw_vec(nx);
  inst.d1 = draw_vec(ny);
  inst.c2 = draw_vec(nx);
  inst.d2 = draw_vec(ny);

  inst.A1 = DenseMatrix(2 * nx, nx);
  inst.B1 = DenseMatrix(2 * nx, ny);
  inst.b1.assign(2 * nx, spec.box);
  for (std::size_t j = 0; j < nx; ++j) {
    inst.A1(j, j) = 1.0;
    inst.A1(nx + j, j) = -1.0;
  }

  const std::size_t m2 = spec.m2 + 2 * spec.n_yC;
  inst.A2 = DenseMatrix(m2, nx);
  inst.B2 = DenseMatrix(m2, ny);
  inst.b2.assign(m2, spec.y_bound);
  for (std::size_t i = 0; i < spec.m2; ++i) {
    for (std::size_t j = 0; j < nx; ++j) inst.A2(i, j) = sparse(rng, spec.density);
  }
  for (std::size_t i = 0; i < spec.m2; ++i) {
    for (std::size_t j = 0; j < ny; ++j) inst.B2(i, j) = sparse(rng, spec.density);
  }
  for (std::size_t i = 0; i < spec.m2; ++i) inst.b2[i] = coefficient(rng);
  for (std::size_t k = 0; k < spec.n_yC; ++k) {
    inst.B2(spec.m2 + k, k) = 1.0;
    inst.B2(spec.m2 + spec.n_yC + k, k) = -1.0;
  }
  return inst;
}

GeneratedInstance generate_instance(const SizeSpec& spec, std::uint64_t seed,
                                    std::size_t retry_cap) {
  std::mt19937_64 rng(seed);
  for (std::size_t attempt = 1; attempt <= retry_cap; ++attempt) {
    BilevelInstance inst = draw_instance(spec, rng);
    try {
      const HprRelaxation relax = hpr_relax(inst);
      solve_follower(inst, relax.x_hat, 1e-9);
      if (check_bilevel_feasible(inst, relax.x_hat, relax.y_hat, 1e-6).feasible) {
        continue;
      }
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::kInfeasibleInstance:
        case ErrorCode::kUnboundedInstance:
        case ErrorCode::kLowerLevelInfeasible:
        case ErrorCode::kUnboundedLowerLevel:
          continue;
        default:
          throw;
      }
    }
    return GeneratedInstance{std::move(inst), seed, attempt};
  }
  throw Error(ErrorCode::kGenerationExhausted,
              "no acceptable instance within the retry cap");
}

}  // namespace prs
