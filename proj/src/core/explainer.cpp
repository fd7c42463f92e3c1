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

#include "core/explainer.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/masking.hpp"
#include "core/regression.hpp"
#include "core/sampler.hpp"

namespace shapbox {

int Explanation::num_varying() const {
  int count = 0;
  for (const auto bit : varying_mask) count += bit ? 1 : 0;
  return count;
}

std::int64_t ResolveBudget(int num_varying,
                           std::optional<std::int64_t> requested) {
  const std::int64_t available = NonTrivialCoalitionCount(num_varying);
  if (requested.has_value()) {
    if (*requested < 2) {
      throw Error(ErrorCode::kConfig,
                  "budget must be >= 2, got " + std::to_string(*requested));
    }
    return std::min(*requested, available);
  }
  return std::min<std::int64_t>(available, 2 * std::int64_t{num_varying} +
                                               2048);
}

void ValidateInputs(const Model& model, std::span<const double> x,
                    const Matrix& background) {
  if (x.empty()) {
    throw Error(ErrorCode::kShape, "instance must have at least one feature");
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!std::isfinite(x[j])) {
      throw Error(ErrorCode::kNumeric,
                  "instance feature " + std::to_string(j) + " is not finite");
    }
  }
  if (background.rows() == 0) {
    throw Error(ErrorCode::kShape, "background set must have at least 1 row");
  }
  if (background.cols() != x.size()) {
    throw Error(ErrorCode::kShape,
                "instance has " + std::to_string(x.size()) +
                    " features but background has " +
                    std::to_string(background.cols()));
  }
  for (const double v : background.data()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kNumeric, "background contains a non-finite value");
    }
  }
  CheckModelWidth(model, x.size());
}

std::vector<double> EvaluateModel(const Model& model, const Matrix& rows) {
  auto out = model.PredictBatch(rows);
  if (out.size() != rows.rows()) {
    throw Error(ErrorCode::kContract,
                "model returned " + std::to_string(out.size()) +
                    " predictions for " + std::to_string(rows.rows()) +
                    " rows");
  }
  return out;
}

Explanation Explain(const Model& model, std::span<const double> x,
                    const Matrix& background, const ExplainerConfig& config) {
  ValidateInputs(model, x, background);
  if (!(config.vary_tolerance >= 0.0) || !std::isfinite(config.vary_tolerance)) {
    throw Error(ErrorCode::kConfig,
                "vary tolerance must be a finite non-negative number");
  }
  if (config.n_samples.has_value() && *config.n_samples < 2) {
    throw Error(ErrorCode::kConfig, "budget must be >= 2, got " +
                                        std::to_string(*config.n_samples));
  }

  Explanation result;
  result.seed = config.seed;
  result.phi.assign(x.size(), 0.0);
  result.varying_mask = FindVaryingFeatures(x, background, config.vary_tolerance);

  Matrix instance(1, x.size(), std::vector<double>(x.begin(), x.end()));
  const auto fx = EvaluateModel(model, instance);
  const auto background_out = EvaluateModel(model, background);
  if (!std::isfinite(fx[0])) {
    throw Error(ErrorCode::kNumeric, "model output for the instance is not finite");
  }
  CheckFinitePredictions(background_out);
  result.prediction = fx[0];
  result.base_value =
      AggregateOutputs(background_out, background_out.size()).front();

  const auto varying = VaryingIndices(result.varying_mask);
  const int num_varying = static_cast<int>(varying.size());
  if (num_varying == 0) {
    result.no_varying_features = true;
    result.base_value = result.prediction;
    return result;
  }
  if (num_varying == 1) {
    result.phi[varying[0]] = result.prediction - result.base_value;
    return result;
  }

  const std::int64_t budget = ResolveBudget(num_varying, config.n_samples);
  auto plan = SampleCoalitions(num_varying, budget, config.seed);
  const Matrix masked =
      BuildMaskedRows(x, background, plan.samples, result.varying_mask);
  const auto raw = EvaluateModel(model, masked);
  const auto outputs = AggregateOutputs(raw, background.rows());
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    plan.samples[k].output = outputs[k];
  }

  const auto phi =
      plan.full_enumeration
          ? SolveFullEnumeration(plan.samples, result.prediction,
                                 result.base_value, num_varying)
          : SolveWeightedRegression(plan.samples, result.prediction,
                                    result.base_value, num_varying);
  for (int v = 0; v < num_varying; ++v) result.phi[varying[v]] = phi[v];
  result.samples_used = static_cast<std::int64_t>(plan.samples.size());
  result.full_enumeration = plan.full_enumeration;
  return result;
}

}  // namespace shapbox
