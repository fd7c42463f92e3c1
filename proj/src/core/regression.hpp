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

#ifndef SHAPBOX_CORE_REGRESSION_HPP_
#define SHAPBOX_CORE_REGRESSION_HPP_

#include <span>
#include <vector>

#include "core/coalition.hpp"

namespace shapbox {

// Weighted least squares fit of the additive surrogate
//   g(z) = phi0 + sum_j phi_j z_j
// to the sample outputs, with g(empty) = phi0 and g(full) = fx enforced by
// eliminating the last coefficient. Rank-deficient designs yield the
// minimum-norm solution of the reduced problem.
//
// Every sample must have 1 <= size <= num_varying - 1 and a finite output;
// a non-finite output raises kNumeric naming the sample index.
std::vector<double> SolveWeightedRegression(
    std::span<const WeightedSample> samples, double fx, double phi0,
    int num_varying);

// Closed-form solution of the same problem when the samples are exactly the
// 2^M - 2 non-trivial coalitions at their kernel weights. In that case the
// weighted Gram matrix is a*I + b*(11^T - I) with a - b = (M - 1) / M, so
//   phi_j = (c_j - mean(c)) * M / (M - 1) + (fx - phi0) / M,
//   c_j   = sum over coalitions containing j of weight * (output - phi0).
// The sums are taken in sorted order, which makes the result independent of
// how features and coalitions are ordered.
std::vector<double> SolveFullEnumeration(
    std::span<const WeightedSample> samples, double fx, double phi0,
    int num_varying);

}  // namespace shapbox

#endif  // SHAPBOX_CORE_REGRESSION_HPP_
