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

#ifndef PRS_SIMD_KERNELS_HPP_
#define PRS_SIMD_KERNELS_HPP_

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops shared by the simplex tableau, region membership
// and residual checks. Every kernel has a scalar reference implementation and,
// where the build and the CPU allow it, an AVX2 variant. The variant is picked
// once at first use; PRS_SIMD=scalar|avx2 in the environment overrides it.
//
// axpy and scale are element-wise and produce bit-identical results across
// variants (no FMA contraction). dot and max_excess reassociate the sum and
// agree with the scalar reference to rounding only.

namespace prs::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  // max_i (rows[i,:] . x - rhs[i]) over a row-major rows x cols block;
  // -infinity when rows == 0.
  double (*max_excess)(const double* rows, const double* x, const double* rhs,
                       std::size_t n_rows, std::size_t n_cols);
};

const KernelTable& scalar_kernels();
// Null when the AVX2 variant was not compiled in.
const KernelTable* avx2_kernels();

bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

// Active table. Selection happens on first call.
const KernelTable& kernels();
Isa active_isa();

// Switches the active table. Not thread-safe; meant for start-up code and
// equivalence tests. Throws std::invalid_argument when `isa` is unavailable.
void force_isa(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  kernels().axpy(a, x.data(), y.data(), y.size());
}

inline void scale(double a, std::span<double> x) {
  kernels().scale(a, x.data(), x.size());
}

inline double dot(std::span<const double> x, std::span<const double> y) {
  return kernels().dot(x.data(), y.data(), x.size());
}

}  // namespace prs::simd

#endif  // PRS_SIMD_KERNELS_HPP_
