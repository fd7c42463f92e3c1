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

#include "core/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace shapbox {
namespace {

void CheckSize(int num_features, int s) {
  if (num_features < 2) {
    throw Error(ErrorCode::kDomain,
                "kernel weight needs at least 2 features, got " +
                    std::to_string(num_features));
  }
  if (s < 0 || s > num_features) {
    throw Error(ErrorCode::kDomain, "coalition size " + std::to_string(s) +
                                        " outside [0, " +
                                        std::to_string(num_features) + "]");
  }
  if (s == 0 || s == num_features) {
    throw Error(ErrorCode::kDomain,
                "coalition size " + std::to_string(s) +
                    " has infinite weight; handled via constraints, not "
                    "sampling");
  }
}

}  // namespace

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  // Each partial product is C(n - k + i, i), exact while below 2^53.
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (std::isinf(result)) return result;
  }
  return result;
}

double KernelWeight(int num_features, int s) {
  CheckSize(num_features, s);
  const int m = num_features;
  const int k = std::min(s, m - s);
  const double denom_rest = static_cast<double>(k) * static_cast<double>(m - k);
  const double binom = Binomial(m, k);
  if (std::isfinite(binom)) {
    return static_cast<double>(m - 1) / (binom * denom_rest);
  }
  // Log space for very wide inputs where C(M, s) overflows.
  const double log_binom = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                           std::lgamma(m - k + 1.0);
  return std::exp(std::log(m - 1.0) - log_binom - std::log(denom_rest));
}

double SizeLevelMass(int num_features, int s) {
  CheckSize(num_features, s);
  const int k = std::min(s, num_features - s);
  return static_cast<double>(num_features - 1) /
         (static_cast<double>(k) * static_cast<double>(num_features - k));
}

}  // namespace shapbox
