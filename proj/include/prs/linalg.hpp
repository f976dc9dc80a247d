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

#ifndef PRS_LINALG_HPP_
#define PRS_LINALG_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace prs {

using Vector = std::vector<double>;

// Row-major dense matrix. entries().size() == rows() * cols() always.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

  // Rows must all have the same length; throws kMalformedProblem otherwise.
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows,
                               std::size_t cols_if_empty = 0);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows,
      std::size_t cols_if_empty = 0);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  bool all_finite() const;

  // this * x
  Vector multiply(std::span<const double> x) const;
  // this^T * y
  Vector multiply_transposed(std::span<const double> y) const;
  DenseMatrix multiply(const DenseMatrix& other) const;

  DenseMatrix select_rows(std::span<const std::size_t> idx) const;
  DenseMatrix select_cols(std::span<const std::size_t> idx) const;
  // Rows of `bottom` appended below this; column counts must agree.
  DenseMatrix stack(const DenseMatrix& bottom) const;
  std::vector<std::vector<double>> to_rows() const;

  void append_row(std::span<const double> values);

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm1(std::span<const double> a);
bool all_finite(std::span<const double> v);
Vector subtract(std::span<const double> a, std::span<const double> b);

// Solution of the square system M z = rhs by partial-pivot LU (Eigen).
// Throws kSingularBasis when M is numerically singular.
Vector solve_square(const DenseMatrix& m, std::span<const double> rhs);
DenseMatrix inverse(const DenseMatrix& m);
// 2-norm condition number via SVD; 1 for the empty matrix, +inf if singular.
double condition_number(const DenseMatrix& m);
// Numerical rank via column-pivoted QR.
std::size_t rank(const DenseMatrix& m, double tol = 1e-10);

}  // namespace prs

#endif  // PRS_LINALG_HPP_
