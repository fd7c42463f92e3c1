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

#include "models/tree_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace shapbox {
namespace {

std::string NodePath(std::size_t tree, std::size_t node) {
  return "trees[" + std::to_string(tree) + "].nodes[" + std::to_string(node) +
         "]";
}

// Walks the tree from its root; each node may be entered once.
void ValidateTree(const Tree& tree, std::size_t t, std::size_t declared_width,
                  std::size_t& min_width) {
  const auto count = static_cast<int>(tree.nodes.size());
  if (count == 0) {
    throw Error(ErrorCode::kValidation,
                "trees[" + std::to_string(t) + "].nodes: must not be empty");
  }
  if (tree.root < 0 || tree.root >= count) {
    throw Error(ErrorCode::kValidation, "trees[" + std::to_string(t) +
                                            "].root: index " +
                                            std::to_string(tree.root) +
                                            " out of range");
  }
  std::vector<std::uint8_t> seen(tree.nodes.size(), 0);
  std::vector<int> stack{tree.root};
  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    if (seen[idx]) {
      throw Error(ErrorCode::kValidation,
                  NodePath(t, idx) + ": reached twice (cycle or shared child)");
    }
    seen[idx] = 1;
    const TreeNode& node = tree.nodes[idx];
    if (node.is_leaf()) {
      if (!std::isfinite(node.leaf)) {
        throw Error(ErrorCode::kValidation, NodePath(t, idx) + ".leaf: must be finite");
      }
      continue;
    }
    if (!std::isfinite(node.threshold)) {
      throw Error(ErrorCode::kValidation,
                  NodePath(t, idx) + ".threshold: must be finite");
    }
    if (declared_width != 0 &&
        static_cast<std::size_t>(node.feature) >= declared_width) {
      throw Error(ErrorCode::kValidation,
                  NodePath(t, idx) + ".feature: " + std::to_string(node.feature) +
                      " >= num_features " + std::to_string(declared_width));
    }
    min_width = std::max(min_width, static_cast<std::size_t>(node.feature) + 1);
    for (const int child : {node.left, node.right}) {
      if (child < 0 || child >= count) {
        throw Error(ErrorCode::kValidation,
                    NodePath(t, idx) + ": dangling child index " +
                        std::to_string(child));
      }
      stack.push_back(child);
    }
  }
}

int Depth(const Tree& tree, int idx) {
  const TreeNode& node = tree.nodes[idx];
  if (node.is_leaf()) return 0;
  return 1 + std::max(Depth(tree, node.left), Depth(tree, node.right));
}

}  // namespace

TreeEnsembleModel::TreeEnsembleModel(std::vector<Tree> trees, double base_score,
                                     OutputTransform transform,
                                     std::size_t num_features)
    : trees_(std::move(trees)),
      base_score_(base_score),
      transform_(transform),
      declared_width_(num_features) {
  if (!std::isfinite(base_score_)) {
    throw Error(ErrorCode::kValidation, "base_score: must be finite");
  }
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    ValidateTree(trees_[t], t, declared_width_, min_width_);
  }
}

double TreeEnsembleModel::RawScore(std::span<const double> row) const {
  double score = base_score_;
  for (const Tree& tree : trees_) {
    const TreeNode* node = &tree.nodes[tree.root];
    while (!node->is_leaf()) {
      node = &tree.nodes[row[node->feature] < node->threshold ? node->left
                                                               : node->right];
    }
    score += node->leaf;
  }
  return score;
}

std::vector<double> TreeEnsembleModel::PredictBatch(const Matrix& rows) const {
  CheckModelWidth(*this, rows.cols());
  if (rows.cols() < min_width_) {
    throw Error(ErrorCode::kShape, "rows have " + std::to_string(rows.cols()) +
                                       " features but the trees split on "
                                       "feature " +
                                       std::to_string(min_width_ - 1));
  }
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const double raw = RawScore(rows.row(r));
    out[r] = transform_ == OutputTransform::kSigmoid
                 ? 1.0 / (1.0 + std::exp(-raw))
                 : raw;
  }
  CheckFinitePredictions(out);
  return out;
}

int TreeEnsembleModel::max_depth() const {
  int depth = 0;
  for (const Tree& tree : trees_) depth = std::max(depth, Depth(tree, tree.root));
  return depth;
}

}  // namespace shapbox
