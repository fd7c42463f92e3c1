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

#include "core/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"
#include "core/sampler.hpp"

namespace shapbox {
namespace {

void CheckSamples(std::span<const WeightedSample> samples, double fx,
                  double phi0, int num_varying) {
  if (samples.empty()) {
    throw Error(ErrorCode::kConfig, "regression needs at least one sample");
  }
  if (num_varying < 2) {
    throw Error(ErrorCode::kDomain,
                "regression needs at least 2 varying features, got " +
                    std::to_string(num_varying));
  }
  if (!std::isfinite(fx) || !std::isfinite(phi0)) {
    throw Error(ErrorCode::kNumeric,
                "instance prediction and base value must be finite");
  }
  bool any_weight = false;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (s.coalition.mask.size() != static_cast<std::size_t>(num_varying)) {
      throw Error(ErrorCode::kShape,
                  "coalition " + std::to_string(k) + " has " +
                      std::to_string(s.coalition.mask.size()) +
                      " bits, expected " + std::to_string(num_varying));
    }
    if (s.coalition.size < 1 || s.coalition.size > num_varying - 1) {
      throw Error(ErrorCode::kDomain,
                  "coalition " + std::to_string(k) + " has size " +
                      std::to_string(s.coalition.size) +
                      "; empty and full coalitions are constraints");
    }
    if (!std::isfinite(s.output)) {
      throw Error(ErrorCode::kNumeric, "model output for coalition " +
                                           std::to_string(k) + " (" +
                                           s.coalition.ToString() +
                                           ") is not finite");
    }
    if (!std::isfinite(s.weight) || s.weight < 0.0) {
      throw Error(ErrorCode::kConfig, "coalition " + std::to_string(k) +
                                          " has invalid weight");
    }
    any_weight = any_weight || s.weight > 0.0;
  }
  if (!any_weight) {
    throw Error(ErrorCode::kConfig, "all sample weights are zero");
  }
}

// Compensated sum over the values in ascending order; the result depends only
// on the multiset of inputs.
double OrderIndependentSum(std::vector<double>& values) {
  for (auto& v : values) v += 0.0;  // folds -0.0 into +0.0
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

}  // namespace

std::vector<double> SolveWeightedRegression(
    std::span<const WeightedSample> samples, double fx, double phi0,
    int num_varying) {
  CheckSamples(samples, fx, phi0, num_varying);

  const int last = num_varying - 1;
  const double gap = fx - phi0;
  const auto rows = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd design(rows, last);
  Eigen::VectorXd target(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const auto& s = samples[static_cast<std::size_t>(k)];
    const double scale = std::sqrt(s.weight);
    const double z_last = s.coalition.mask[last];
    for (int j = 0; j < last; ++j) {
      design(k, j) = scale * (s.coalition.mask[j] - z_last);
    }
    target(k) = scale * (s.output - phi0 - z_last * gap);
  }

  const Eigen::VectorXd reduced =
      design.completeOrthogonalDecomposition().solve(target);

  std::vector<double> phi(num_varying);
  double partial = 0.0;
  for (int j = 0; j < last; ++j) {
    phi[j] = reduced(j);
    partial += phi[j];
  }
  phi[last] = gap - partial;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (!std::isfinite(phi[j])) {
      throw Error(ErrorCode::kNumeric, "regression produced a non-finite "
                                       "attribution for varying feature " +
                                           std::to_string(j));
    }
  }
  return phi;
}

std::vector<double> SolveFullEnumeration(
    std::span<const WeightedSample> samples, double fx, double phi0,
    int num_varying) {
  CheckSamples(samples, fx, phi0, num_varying);
  if (static_cast<std::int64_t>(samples.size()) !=
      NonTrivialCoalitionCount(num_varying)) {
    throw Error(ErrorCode::kConfig,
                "closed-form solve needs all " +
                    std::to_string(NonTrivialCoalitionCount(num_varying)) +
                    " coalitions, got " + std::to_string(samples.size()));
  }

  const double m = num_varying;
  std::vector<double> moments(num_varying);
  std::vector<double> terms;
  terms.reserve(samples.size());
  for (int j = 0; j < num_varying; ++j) {
    terms.clear();
    for (const auto& s : samples) {
      if (s.coalition.mask[j]) terms.push_back(s.weight * (s.output - phi0));
    }
    moments[j] = OrderIndependentSum(terms);
  }
  std::vector<double> scratch = moments;
  const double mean = OrderIndependentSum(scratch) / m;
  const double share = (fx - phi0) / m;
  const double scale = m / (m - 1.0);

  std::vector<double> phi(num_varying);
  for (int j = 0; j < num_varying; ++j) {
    phi[j] = (moments[j] - mean) * scale + share;
  }
  return phi;
}

}  // namespace shapbox
