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

#include <limits>

#include "prs/simd/kernels.hpp"

namespace prs::simd {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double max_excess_scalar(const double* rows, const double* x, const double* rhs,
                         std::size_t n_rows, std::size_t n_cols) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double e = dot_scalar(rows + r * n_cols, x, n_cols) - rhs[r];
    if (e > worst) worst = e;
  }
  return worst;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::kScalar, axpy_scalar, scale_scalar,
                                 dot_scalar, max_excess_scalar};
  return table;
}

}  // namespace prs::simd
