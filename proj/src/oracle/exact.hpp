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

#ifndef SHAPBOX_ORACLE_EXACT_HPP_
#define SHAPBOX_ORACLE_EXACT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "core/explainer.hpp"
#include "core/matrix.hpp"
#include "core/model.hpp"

namespace shapbox {

inline constexpr int kMaxExactFeatures = 20;

// v(S) for every subset S of the varying features, indexed by bitmask (bit v
// set = varying feature v present). Each value is the model output averaged
// over the background rows.
struct SubsetValueCache {
  int num_varying = 0;
  std::vector<double> values;
};

SubsetValueCache EvaluateAllSubsets(const Model& model,
                                    std::span<const double> x,
                                    const Matrix& background,
                                    std::span<const std::uint8_t> varying_mask);

// Brute-force Shapley values from the permutation-weighted marginal
// contribution formula. Independent of the regression path; used as ground
// truth for it. Refuses more than kMaxExactFeatures varying features.
Explanation ExactShapley(const Model& model, std::span<const double> x,
                         const Matrix& background, double tolerance = 1e-8);

}  // namespace shapbox

#endif  // SHAPBOX_ORACLE_EXACT_HPP_
