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

#ifndef SHAPBOX_TESTS_TESTING_TEST_UTIL_HPP_
#define SHAPBOX_TESTS_TESTING_TEST_UTIL_HPP_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "core/matrix.hpp"
#include "core/model.hpp"
#include "models/linear_model.hpp"
#include "models/tree_ensemble.hpp"

namespace shapbox::testing {

// Shapley values by averaging marginal contributions over every ordering of
// the features. Deliberately shares nothing with the library: its own
// masking, no subset weights, no regression. Only for small M (M! orderings).
inline std::vector<double> PermutationShapley(const Model& model,
                                              std::span<const double> x,
                                              const Matrix& background) {
  const std::size_t m = x.size();
  auto value = [&](const std::vector<bool>& present) {
    Matrix rows(background.rows(), m);
    for (std::size_t i = 0; i < background.rows(); ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        rows(i, j) = present[j] ? x[j] : background(i, j);
      }
    }
    const auto out = model.PredictBatch(rows);
    return std::accumulate(out.begin(), out.end(), 0.0) /
           static_cast<double>(out.size());
  };
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(m, 0.0);
  double orderings = 0.0;
  do {
    std::vector<bool> present(m, false);
    double before = value(present);
    for (const std::size_t j : order) {
      present[j] = true;
      const double after = value(present);
      phi[j] += after - before;
      before = after;
    }
    orderings += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& p : phi) p /= orderings;
  return phi;
}

inline std::shared_ptr<LinearModel> RandomLinear(std::size_t m,
                                                 std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> w(m);
  for (auto& v : w) v = normal(rng);
  return std::make_shared<LinearModel>(std::move(w), normal(rng));
}

// Random complete binary tree of the given depth over m features.
inline Tree RandomTree(std::size_t m, int depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> feature(0, static_cast<int>(m) - 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  Tree tree;
  tree.root = 0;
  std::vector<std::pair<int, int>> frontier{{0, 0}};
  tree.nodes.emplace_back();
  while (!frontier.empty()) {
    auto [idx, level] = frontier.back();
    frontier.pop_back();
    if (level == depth) {
      tree.nodes[idx].leaf = normal(rng);
      continue;
    }
    const int left = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    tree.nodes[idx].feature = feature(rng);
    tree.nodes[idx].threshold = normal(rng) * 0.5;
    tree.nodes[idx].left = left;
    tree.nodes[idx].right = left + 1;
    frontier.push_back({left, level + 1});
    frontier.push_back({left + 1, level + 1});
  }
  return tree;
}

inline std::shared_ptr<TreeEnsembleModel> RandomEnsemble(
    std::size_t m, int num_trees, int depth, std::mt19937_64& rng,
    OutputTransform transform = OutputTransform::kIdentity) {
  std::vector<Tree> trees;
  for (int t = 0; t < num_trees; ++t) trees.push_back(RandomTree(m, depth, rng));
  return std::make_shared<TreeEnsembleModel>(std::move(trees), 0.1, transform, m);
}

inline Matrix RandomMatrix(std::size_t rows, std::size_t cols,
                           std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (auto& v : out.data()) v = normal(rng);
  return out;
}

inline std::vector<double> RandomVector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = normal(rng);
  return out;
}

// Counts PredictBatch calls and rows on top of another model.
class CountingModel final : public Model {
 public:
  explicit CountingModel(std::shared_ptr<const Model> inner)
      : inner_(std::move(inner)) {}
  std::size_t num_features() const override { return inner_->num_features(); }
  std::string type_name() const override { return "counting"; }
  std::vector<double> PredictBatch(const Matrix& rows) const override {
    ++calls;
    batch_sizes.push_back(rows.rows());
    return inner_->PredictBatch(rows);
  }
  mutable int calls = 0;
  mutable std::vector<std::size_t> batch_sizes;

 private:
  std::shared_ptr<const Model> inner_;
};

// Evaluates inner on rows whose columns are permuted: column j of the input
// is fed to inner as column perm[j]. Outputs are bit-identical to inner's.
class PermutedModel final : public Model {
 public:
  PermutedModel(std::shared_ptr<const Model> inner, std::vector<std::size_t> perm)
      : inner_(std::move(inner)), perm_(std::move(perm)) {}
  std::size_t num_features() const override { return perm_.size(); }
  std::string type_name() const override { return "permuted"; }
  std::vector<double> PredictBatch(const Matrix& rows) const override {
    Matrix original(rows.rows(), rows.cols());
    for (std::size_t r = 0; r < rows.rows(); ++r) {
      for (std::size_t j = 0; j < rows.cols(); ++j) {
        original(r, perm_[j]) = rows(r, j);
      }
    }
    return inner_->PredictBatch(original);
  }

 private:
  std::shared_ptr<const Model> inner_;
  std::vector<std::size_t> perm_;
};

}  // namespace shapbox::testing

#endif  // SHAPBOX_TESTS_TESTING_TEST_UTIL_HPP_
