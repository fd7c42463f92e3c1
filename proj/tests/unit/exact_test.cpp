/*
 * Copyright 2026 The shapbox Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "oracle/exact.hpp"

#include <random>

#include "gtest/gtest.h"
#include "core/error.hpp"
#include "models/linear_model.hpp"
#include "testing/test_util.hpp"

namespace shapbox {
namespace {

TEST(ExactShapley, LinearExample) {
  const LinearModel model({2, -1}, 0.5);
  const std::vector<double> x{3, 4};
  const auto bg = Matrix::FromRows({{1, 2}});
  const auto ex = ExactShapley(model, x, bg);
  EXPECT_NEAR(ex.phi[0], 4.0, 1e-12);
  EXPECT_NEAR(ex.phi[1], -2.0, 1e-12);
  EXPECT_DOUBLE_EQ(ex.base_value, 0.5);
}

TEST(ExactShapley, ProductExample) {
  const FunctionModel model([](const Matrix& rows) {
    std::vector<double> out(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) out[r] = rows(r, 0) * rows(r, 1);
    return out;
  });
  const auto ex = ExactShapley(model, std::vector<double>{1, 1},
                               Matrix::FromRows({{0, 0}}));
  EXPECT_NEAR(ex.phi[0], 0.5, 1e-12);
  EXPECT_NEAR(ex.phi[1], 0.5, 1e-12);
  EXPECT_EQ(ex.base_value, 0.0);
}

TEST(ExactShapley, ConstantModel) {
  const FunctionModel model(
      [](const Matrix& rows) { return std::vector<double>(rows.rows(), 3.25); });
  std::mt19937_64 rng(1);
  const auto ex = ExactShapley(model, testing::RandomVector(5, rng),
                               testing::RandomMatrix(3, 5, rng));
  EXPECT_EQ(ex.phi, std::vector<double>(5, 0.0));
  EXPECT_EQ(ex.base_value, 3.25);
}

TEST(ExactShapley, MatchesPermutationOracle) {
  std::mt19937_64 rng(2);
  for (int m = 1; m <= 6; ++m) {
    for (std::size_t n : {1u, 3u}) {
      auto model = testing::RandomEnsemble(m, 4, 3, rng, OutputTransform::kSigmoid);
      const auto x = testing::RandomVector(m, rng);
      const auto bg = testing::RandomMatrix(n, m, rng);
      const auto exact = ExactShapley(*model, x, bg);
      const auto oracle = testing::PermutationShapley(*model, x, bg);
      for (int j = 0; j < m; ++j) EXPECT_NEAR(exact.phi[j], oracle[j], 1e-12);
    }
  }
}

TEST(ExactShapley, Efficiency) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto model = testing::RandomEnsemble(9, 6, 4, rng);
    const auto ex = ExactShapley(*model, testing::RandomVector(9, rng),
                                 testing::RandomMatrix(2, 9, rng));
    double total = ex.base_value;
    for (double p : ex.phi) total += p;
    EXPECT_NEAR(total, ex.prediction, 1e-9);
  }
}

TEST(ExactShapley, DummyFeature) {
  // Model ignores feature 2 entirely.
  const FunctionModel model([](const Matrix& rows) {
    std::vector<double> out(rows.rows());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      out[r] = rows(r, 0) * rows(r, 1) + std::sin(rows(r, 3));
    }
    return out;
  });
  std::mt19937_64 rng(4);
  const auto ex = ExactShapley(model, testing::RandomVector(4, rng),
                               testing::RandomMatrix(3, 4, rng));
  EXPECT_NEAR(ex.phi[2], 0.0, 1e-12);
}

TEST(ExactShapley, Linearity) {
  std::mt19937_64 rng(5);
  auto f1 = testing::RandomEnsemble(6, 3, 3, rng);
  auto f2 = testing::RandomLinear(6, rng);
  const double a = 1.7;
  const double b = -0.4;
  const FunctionModel combo([&](const Matrix& rows) {
    auto p1 = f1->PredictBatch(rows);
    const auto p2 = f2->PredictBatch(rows);
    for (std::size_t k = 0; k < p1.size(); ++k) p1[k] = a * p1[k] + b * p2[k];
    return p1;
  });
  const auto x = testing::RandomVector(6, rng);
  const auto bg = testing::RandomMatrix(4, 6, rng);
  const auto e1 = ExactShapley(*f1, x, bg);
  const auto e2 = ExactShapley(*f2, x, bg);
  const auto ec = ExactShapley(combo, x, bg);
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(ec.phi[j], a * e1.phi[j] + b * e2.phi[j], 1e-9);
  }
}

TEST(ExactShapley, CostGuard) {
  const LinearModel model(std::vector<double>(21, 1.0), 0.0);
  std::vector<double> x(21, 1.0);
  try {
    ExactShapley(model, x, Matrix(1, 21, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCostGuard);
  }
  // Pinning features brings it back under the guard.
  for (int j = 15; j < 21; ++j) x[j] = 0.0;
  const auto ex = ExactShapley(model, x, Matrix(1, 21, 0.0));
  EXPECT_EQ(ex.phi[20], 0.0);
  EXPECT_NEAR(ex.phi[3], 1.0, 1e-9);
}

}  // namespace
}  // namespace shapbox
