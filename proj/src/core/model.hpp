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

#ifndef SHAPBOX_CORE_MODEL_HPP_
#define SHAPBOX_CORE_MODEL_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace shapbox {

// Batch-prediction contract shared by every adapter: one finite scalar per
// input row, deterministic for a given row.
class Model {
 public:
  virtual ~Model() = default;

  // Expected row width, or 0 when the adapter accepts any width.
  virtual std::size_t num_features() const = 0;
  virtual std::string type_name() const = 0;
  virtual std::vector<double> PredictBatch(const Matrix& rows) const = 0;
};

// Wraps an arbitrary callable. No output validation happens here; the
// explainer checks length and finiteness itself.
class FunctionModel final : public Model {
 public:
  using Fn = std::function<std::vector<double>(const Matrix&)>;

  FunctionModel(Fn fn, std::size_t num_features = 0,
                std::string type_name = "function")
      : fn_(std::move(fn)),
        num_features_(num_features),
        type_name_(std::move(type_name)) {}

  std::size_t num_features() const override { return num_features_; }
  std::string type_name() const override { return type_name_; }
  std::vector<double> PredictBatch(const Matrix& rows) const override {
    return fn_(rows);
  }

 private:
  Fn fn_;
  std::size_t num_features_;
  std::string type_name_;
};

// Throws kShape if rows are not as wide as the model expects.
void CheckModelWidth(const Model& model, std::size_t cols);

// Throws kNumeric naming the first non-finite prediction.
void CheckFinitePredictions(const std::vector<double>& predictions);

}  // namespace shapbox

#endif  // SHAPBOX_CORE_MODEL_HPP_
