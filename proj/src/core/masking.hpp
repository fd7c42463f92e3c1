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

#ifndef SHAPBOX_CORE_MASKING_HPP_
#define SHAPBOX_CORE_MASKING_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "core/coalition.hpp"
#include "core/matrix.hpp"

namespace shapbox {

// Bit j is set iff |x[j] - background(i, j)| > tolerance for some row i.
std::vector<std::uint8_t> FindVaryingFeatures(std::span<const double> x,
                                              const Matrix& background,
                                              double tolerance);

std::vector<std::size_t> VaryingIndices(
    std::span<const std::uint8_t> varying_mask);

// Synthesizes one row per (coalition, background row) pair, coalition-major.
// Coalition masks index the varying features only. Present varying features
// and all non-varying features take the instance value; missing varying
// features take the background value.
Matrix BuildMaskedRows(std::span<const double> x, const Matrix& background,
                       std::span<const Coalition> coalitions,
                       std::span<const std::uint8_t> varying_mask);

// Same layout as above for plan samples, without copying the coalitions out.
Matrix BuildMaskedRows(std::span<const double> x, const Matrix& background,
                       std::span<const WeightedSample> samples,
                       std::span<const std::uint8_t> varying_mask);

// Mean of each consecutive block of num_background values.
std::vector<double> AggregateOutputs(std::span<const double> raw,
                                     std::size_t num_background);

}  // namespace shapbox

#endif  // SHAPBOX_CORE_MASKING_HPP_
