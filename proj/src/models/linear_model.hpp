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

#ifndef SHAPBOX_MODELS_LINEAR_MODEL_HPP_
#define SHAPBOX_MODELS_LINEAR_MODEL_HPP_

#include <vector>

#include "core/model.hpp"

namespace shapbox {

// weights . v + bias
class LinearModel final : public Model {
 public:
  LinearModel(std::vector<double> weights, double bias);

  std::size_t num_features() const override { return weights_.size(); }
  std::string type_name() const override { return "linear"; }
  std::vector<double> PredictBatch(const Matrix& rows) const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_;
};

}  // namespace shapbox

#endif  // SHAPBOX_MODELS_LINEAR_MODEL_HPP_
