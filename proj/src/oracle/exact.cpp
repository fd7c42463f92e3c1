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

#include <bit>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/masking.hpp"

namespace shapbox {
namespace {

// |S|! (M - |S| - 1)! / M! for |S| = 0 .. M - 1, by the ratio
// w(s + 1) = w(s) * (s + 1) / (M - s - 1) starting from w(0) = 1 / M.
std::vector<double> ShapleyWeights(int m) {
  std::vector<double> w(m);
  w[0] = 1.0 / m;
  for (int s = 0; s + 1 < m; ++s) {
    w[s + 1] = w[s] * static_cast<double>(s + 1) / static_cast<double>(m - s - 1);
  }
  return w;
}

}  // namespace

SubsetValueCache EvaluateAllSubsets(const Model& model,
                                    std::span<const double> x,
                                    const Matrix& background,
                                    std::span<const std::uint8_t> varying_mask) {
  std::vector<std::size_t> varying;
  for (std::size_t j = 0; j < varying_mask.size(); ++j) {
    if (varying_mask[j]) varying.push_back(j);
  }
  const int m = static_cast<int>(varying.size());
  if (m > kMaxExactFeatures) {
    throw Error(ErrorCode::kCostGuard,
                std::to_string(m) + " varying features exceed the exact limit of " +
                    std::to_string(kMaxExactFeatures));
  }
  const std::size_t subsets = std::size_t{1} << m;
  const std::size_t n = background.rows();

  Matrix rows(subsets * n, x.size());
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    for (std::size_t i = 0; i < n; ++i) {
      auto row = rows.row(mask * n + i);
      const auto bg = background.row(i);
      for (std::size_t j = 0; j < x.size(); ++j) row[j] = x[j];
      for (int v = 0; v < m; ++v) {
        if (!((mask >> v) & 1U)) row[varying[v]] = bg[varying[v]];
      }
    }
  }

  const auto raw = EvaluateModel(model, rows);
  SubsetValueCache cache;
  cache.num_varying = m;
  cache.values.resize(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += raw[mask * n + i];
    cache.values[mask] = sum / static_cast<double>(n);
    if (!std::isfinite(cache.values[mask])) {
      throw Error(ErrorCode::kNumeric,
                  "model output for subset " + std::to_string(mask) +
                      " is not finite");
    }
  }
  return cache;
}

Explanation ExactShapley(const Model& model, std::span<const double> x,
                         const Matrix& background, double tolerance) {
  ValidateInputs(model, x, background);

  Explanation result;
  result.phi.assign(x.size(), 0.0);
  result.varying_mask = FindVaryingFeatures(x, background, tolerance);
  Matrix instance(1, x.size(), std::vector<double>(x.begin(), x.end()));
  result.prediction = EvaluateModel(model, instance).front();

  const auto cache = EvaluateAllSubsets(model, x, background, result.varying_mask);
  const int m = cache.num_varying;
  result.base_value = cache.values.front();
  result.full_enumeration = true;
  result.samples_used = static_cast<std::int64_t>(cache.values.size());
  if (m == 0) {
    result.no_varying_features = true;
    return result;
  }

  const auto weights = ShapleyWeights(m);
  const auto varying = VaryingIndices(result.varying_mask);
  const std::size_t subsets = cache.values.size();
  for (int v = 0; v < m; ++v) {
    const std::size_t bit = std::size_t{1} << v;
    double phi = 0.0;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const int size = std::popcount(mask);
      phi += weights[size] * (cache.values[mask | bit] - cache.values[mask]);
    }
    result.phi[varying[v]] = phi;
  }
  return result;
}

}  // namespace shapbox
