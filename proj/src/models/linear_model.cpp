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

#include "models/linear_model.hpp"

#include <cmath>

#include "core/error.hpp"

namespace shapbox {

LinearModel::LinearModel(std::vector<double> weights, double bias)
    : weights_(std::move(weights)), bias_(bias) {
  if (weights_.empty()) {
    throw Error(ErrorCode::kValidation, "weights: must not be empty");
  }
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (!std::isfinite(weights_[j])) {
      throw Error(ErrorCode::kValidation,
                  "weights[" + std::to_string(j) + "]: must be finite");
    }
  }
  if (!std::isfinite(bias_)) {
    throw Error(ErrorCode::kValidation, "bias: must be finite");
  }
}

std::vector<double> LinearModel::PredictBatch(const Matrix& rows) const {
  CheckModelWidth(*this, rows.cols());
  std::vector<double> out(rows.rows());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto row = rows.row(r);
    double acc = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) acc += weights_[j] * row[j];
    out[r] = acc;
  }
  CheckFinitePredictions(out);
  return out;
}

}  // namespace shapbox
