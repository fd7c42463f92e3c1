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

#ifndef SHAPBOX_CORE_EXPLAINER_HPP_
#define SHAPBOX_CORE_EXPLAINER_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/matrix.hpp"
#include "core/model.hpp"

namespace shapbox {

struct ExplainerConfig {
  // Regression row budget; nullopt selects min(2^M_v - 2, 2 M_v + 2048).
  std::optional<std::int64_t> n_samples;
  std::uint64_t seed = 0;
  // Features within this absolute distance of every background row are
  // treated as non-varying and get a zero attribution.
  double vary_tolerance = 1e-8;
};

struct Explanation {
  double base_value = 0.0;  // mean model output over the background rows
  double prediction = 0.0;  // model output on the instance
  std::vector<double> phi;
  std::int64_t samples_used = 0;
  std::vector<std::uint8_t> varying_mask;
  std::uint64_t seed = 0;
  bool full_enumeration = false;
  bool no_varying_features = false;

  int num_varying() const;
};

// Budget actually used for num_varying features: AUTO resolution or clamping
// of an explicit request to 2^M_v - 2. Explicit values below 2 are kConfig.
std::int64_t ResolveBudget(int num_varying,
                           std::optional<std::int64_t> requested);

// Kernel SHAP attribution of model(x) against the background set.
//
// The model is called exactly three times: once on x, once on the background
// rows, and once on the batch of masked rows (skipped when fewer than two
// features vary). Deterministic for a fixed seed.
Explanation Explain(const Model& model, std::span<const double> x,
                    const Matrix& background, const ExplainerConfig& config);

// Validates an instance/background pair for an explanation (widths, finite
// values, non-empty background). Throws kShape or kNumeric.
void ValidateInputs(const Model& model, std::span<const double> x,
                    const Matrix& background);

// Calls the model and checks it returned one prediction per row (kContract).
std::vector<double> EvaluateModel(const Model& model, const Matrix& rows);

}  // namespace shapbox

#endif  // SHAPBOX_CORE_EXPLAINER_HPP_
