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

#include "prs/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "prs/errors.hpp"
#include "prs/simd/kernels.hpp"

namespace prs {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedProblem: return "MalformedProblem";
    case ErrorCode::kUnboundedInteger: return "UnboundedInteger";
    case ErrorCode::kInfeasibleInstance: return "InfeasibleInstance";
    case ErrorCode::kUnboundedInstance: return "UnboundedInstance";
    case ErrorCode::kLowerLevelInfeasible: return "LowerLevelInfeasible";
    case ErrorCode::kUnboundedLowerLevel: return "UnboundedLowerLevel";
    case ErrorCode::kSingularBasis: return "SingularBasis";
    case ErrorCode::kEmptyRegion: return "EmptyRegion";
    case ErrorCode::kRegionInfeasible: return "RegionInfeasible";
    case ErrorCode::kRegionUnbounded: return "RegionUnbounded";
    case ErrorCode::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::kGenerationExhausted: return "GenerationExhausted";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> as_eigen(const DenseMatrix& m) {
  return {m.entries().data(), static_cast<Eigen::Index>(m.rows()),
          static_cast<Eigen::Index>(m.cols())};
}

}  // namespace

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                   std::size_t cols_if_empty) {
  const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
  DenseMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw Error(ErrorCode::kMalformedProblem,
                  "ragged matrix: row " + std::to_string(r) + " has " +
                      std::to_string(rows[r].size()) + " entries, expected " +
                      std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows,
    std::size_t cols_if_empty) {
  std::vector<std::vector<double>> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.emplace_back(r);
  return from_rows(v, cols_if_empty);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const { return prs::all_finite(entries_); }

Vector DenseMatrix::multiply(std::span<const double> x) const {
  Vector out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = simd::dot(row(r), x);
  return out;
}

Vector DenseMatrix::multiply_transposed(std::span<const double> y) const {
  Vector out(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    if (y[r] != 0.0) simd::axpy(y[r], row(r), out);
  }
  return out;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(r, k);
      if (a != 0.0) simd::axpy(a, other.row(k), out.row(r));
    }
  }
  return out;
}

DenseMatrix DenseMatrix::select_rows(std::span<const std::size_t> idx) const {
  DenseMatrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto src = row(idx[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

DenseMatrix DenseMatrix::select_cols(std::span<const std::size_t> idx) const {
  DenseMatrix out(rows_, idx.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < idx.size(); ++j) out(r, j) = (*this)(r, idx[j]);
  }
  return out;
}

DenseMatrix DenseMatrix::stack(const DenseMatrix& bottom) const {
  if (rows_ == 0) return bottom;
  if (bottom.rows_ == 0) return *this;
  if (bottom.cols_ != cols_) {
    throw Error(ErrorCode::kMalformedProblem, "stack: column count mismatch");
  }
  DenseMatrix out = *this;
  out.entries_.insert(out.entries_.end(), bottom.entries_.begin(),
                      bottom.entries_.end());
  out.rows_ += bottom.rows_;
  return out;
}

std::vector<std::vector<double>> DenseMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r].assign(row(r).begin(), row(r).end());
  }
  return out;
}

void DenseMatrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kMalformedProblem, "append_row: length mismatch");
  }
  entries_.insert(entries_.end(), values.begin(), values.end());
  ++rows_;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return simd::dot(a, b);
}

double norm2(std::span<const double> a) { return std::sqrt(simd::dot(a, a)); }

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

Vector subtract(std::span<const double> a, std::span<const double> b) {
  Vector out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Vector solve_square(const DenseMatrix& m, std::span<const double> rhs) {
  const std::size_t n = m.rows();
  if (n == 0) return {};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(as_eigen(m));
  const double rcond = lu.rcond();
  if (!(rcond > std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::kSingularBasis, "square system is singular");
  }
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(n));
  Eigen::VectorXd z = lu.solve(b);
  return Vector(z.data(), z.data() + n);
}

DenseMatrix inverse(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix out(n, n);
  if (n == 0) return out;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(as_eigen(m));
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon())) {
    throw Error(ErrorCode::kSingularBasis, "matrix is singular");
  }
  Eigen::MatrixXd inv = lu.inverse();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) = inv(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

double condition_number(const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_eigen(m));
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

std::size_t rank(const DenseMatrix& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(as_eigen(m));
  qr.setThreshold(tol);
  return static_cast<std::size_t>(qr.rank());
}

}  // namespace prs
