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

#include "core/model.hpp"

#include <cmath>

#include "core/error.hpp"

namespace shapbox {

void CheckModelWidth(const Model& model, std::size_t cols) {
  const std::size_t width = model.num_features();
  if (width != 0 && width != cols) {
    throw Error(ErrorCode::kShape, "rows have " + std::to_string(cols) +
                                       " features but the " +
                                       model.type_name() + " model expects " +
                                       std::to_string(width));
  }
}

void CheckFinitePredictions(const std::vector<double>& predictions) {
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    if (!std::isfinite(predictions[k])) {
      throw Error(ErrorCode::kNumeric,
                  "prediction for row " + std::to_string(k) +
                      " is not finite");
    }
  }
}

}  // namespace shapbox
