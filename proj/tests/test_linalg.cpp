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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "prs/errors.hpp"
#include "prs/linalg.hpp"

namespace prs {
namespace {

TEST(DenseMatrix, FromRowsRejectsRaggedInput) {
  try {
    DenseMatrix::from_rows({{1, 2}, {3}});
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedProblem);
  }
}

TEST(DenseMatrix, MultiplyAndTranspose) {
  const auto m = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m.multiply(Vector{1, 0, -1}), (Vector{-2, -2}));
  EXPECT_EQ(m.multiply_transposed(Vector{1, 1}), (Vector{5, 7, 9}));
  const auto p = m.multiply(DenseMatrix::identity(3));
  EXPECT_EQ(p, m);
}

TEST(DenseMatrix, SelectStackAppend) {
  const auto m = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
  const std::vector<std::size_t> r = {2, 0}, c = {1};
  EXPECT_EQ(m.select_rows(r), DenseMatrix::from_rows({{5, 6}, {1, 2}}));
  EXPECT_EQ(m.select_cols(c), DenseMatrix::from_rows({{2}, {4}, {6}}));
  auto s = m.stack(DenseMatrix::from_rows({{7, 8}}));
  EXPECT_EQ(s.rows(), 4u);
  s.append_row(Vector{9, 10});
  EXPECT_EQ(s(4, 1), 10.0);
  EXPECT_EQ(s.to_rows().back(), (Vector{9, 10}));
}

TEST(DenseMatrix, FiniteCheck) {
  auto m = DenseMatrix::from_rows({{1, 2}});
  EXPECT_TRUE(m.all_finite());
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_FALSE(m.all_finite());
}

TEST(Linalg, SolveSquareAndInverse) {
  const auto m = DenseMatrix::from_rows({{2, 1}, {1, 3}});
  const Vector z = solve_square(m, Vector{3, 5});
  EXPECT_NEAR(z[0], 0.8, 1e-14);
  EXPECT_NEAR(z[1], 1.4, 1e-14);
  const auto inv = inverse(m);
  const auto id = m.multiply(inv);
  EXPECT_NEAR(id(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(id(0, 1), 0.0, 1e-14);
}

TEST(Linalg, SingularSystemThrows) {
  const auto m = DenseMatrix::from_rows({{1, 2}, {2, 4}});
  try {
    solve_square(m, Vector{1, 1});
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingularBasis);
  }
  EXPECT_EQ(rank(m), 1u);
  EXPECT_GT(condition_number(m), 1e15);
}

TEST(Linalg, ConditionNumberAndNorms) {
  EXPECT_DOUBLE_EQ(condition_number(DenseMatrix()), 1.0);
  EXPECT_NEAR(condition_number(DenseMatrix::from_rows({{2, 0}, {0, 0.5}})), 4.0, 1e-12);
  EXPECT_DOUBLE_EQ(norm2(Vector{3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(norm1(Vector{3, -4}), 7.0);
  EXPECT_EQ(subtract(Vector{3, 4}, Vector{1, 1}), (Vector{2, 3}));
}

}  // namespace
}  // namespace prs
