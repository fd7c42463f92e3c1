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

#ifndef SHAPBOX_MODELS_TREE_ENSEMBLE_HPP_
#define SHAPBOX_MODELS_TREE_ENSEMBLE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "core/model.hpp"

namespace shapbox {

struct TreeNode {
  // Internal node when feature >= 0; leaf otherwise.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;
  int root = 0;
};

enum class OutputTransform { kIdentity, kSigmoid };

// Gradient-boosted tree ensemble:
//   transform(base_score + sum_t tree_t(v)),
// where each tree goes left iff v[feature] < threshold.
class TreeEnsembleModel final : public Model {
 public:
  // Validates every tree: children in range, no cycles, every node reachable
  // from the root is either a leaf or has two children. num_features = 0
  // means the width is only bounded below by the largest split feature.
  TreeEnsembleModel(std::vector<Tree> trees, double base_score,
                    OutputTransform transform, std::size_t num_features = 0);

  std::size_t num_features() const override { return declared_width_; }
  std::string type_name() const override { return "gbdt"; }
  std::vector<double> PredictBatch(const Matrix& rows) const override;

  double RawScore(std::span<const double> row) const;

  const std::vector<Tree>& trees() const { return trees_; }
  double base_score() const { return base_score_; }
  OutputTransform transform() const { return transform_; }
  std::size_t min_width() const { return min_width_; }
  int max_depth() const;

 private:
  std::vector<Tree> trees_;
  double base_score_;
  OutputTransform transform_;
  std::size_t declared_width_;
  std::size_t min_width_ = 0;
};

}  // namespace shapbox

#endif  // SHAPBOX_MODELS_TREE_ENSEMBLE_HPP_
