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

#include "core/masking.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/error.hpp"

namespace shapbox {
namespace {

void CheckWidth(std::span<const double> x, const Matrix& background) {
  if (background.cols() != x.size()) {
    throw Error(ErrorCode::kShape,
                "instance has " + std::to_string(x.size()) +
                    " features but background has " +
                    std::to_string(background.cols()));
  }
}

template <typename MaskAt>
Matrix Synthesize(std::span<const double> x, const Matrix& background,
                  std::size_t num_coalitions,
                  std::span<const std::uint8_t> varying_mask, MaskAt mask_at) {
  CheckWidth(x, background);
  if (varying_mask.size() != x.size()) {
    throw Error(ErrorCode::kShape,
                "varying mask has " + std::to_string(varying_mask.size()) +
                    " entries, expected " + std::to_string(x.size()));
  }
  const auto varying = VaryingIndices(varying_mask);
  const std::size_t n = background.rows();
  Matrix rows(num_coalitions * n, x.size());
  for (std::size_t k = 0; k < num_coalitions; ++k) {
    const std::vector<std::uint8_t>& mask = mask_at(k);
    if (mask.size() != varying.size()) {
      throw Error(ErrorCode::kShape,
                  "coalition " + std::to_string(k) + " has " +
                      std::to_string(mask.size()) + " bits but " +
                      std::to_string(varying.size()) +
                      " features are varying");
    }
    for (std::size_t i = 0; i < n; ++i) {
      auto out = rows.row(k * n + i);
      std::copy(x.begin(), x.end(), out.begin());
      const auto bg = background.row(i);
      for (std::size_t v = 0; v < varying.size(); ++v) {
        if (!mask[v]) out[varying[v]] = bg[varying[v]];
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<std::uint8_t> FindVaryingFeatures(std::span<const double> x,
                                              const Matrix& background,
                                              double tolerance) {
  CheckWidth(x, background);
  std::vector<std::uint8_t> varying(x.size(), 0);
  for (std::size_t i = 0; i < background.rows(); ++i) {
    const auto bg = background.row(i);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (std::abs(x[j] - bg[j]) > tolerance) varying[j] = 1;
    }
  }
  return varying;
}

std::vector<std::size_t> VaryingIndices(
    std::span<const std::uint8_t> varying_mask) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < varying_mask.size(); ++j) {
    if (varying_mask[j]) out.push_back(j);
  }
  return out;
}

Matrix BuildMaskedRows(std::span<const double> x, const Matrix& background,
                       std::span<const Coalition> coalitions,
                       std::span<const std::uint8_t> varying_mask) {
  return Synthesize(x, background, coalitions.size(), varying_mask,
                    [&](std::size_t k) -> const std::vector<std::uint8_t>& {
                      return coalitions[k].mask;
                    });
}

Matrix BuildMaskedRows(std::span<const double> x, const Matrix& background,
                       std::span<const WeightedSample> samples,
                       std::span<const std::uint8_t> varying_mask) {
  return Synthesize(x, background, samples.size(), varying_mask,
                    [&](std::size_t k) -> const std::vector<std::uint8_t>& {
                      return samples[k].coalition.mask;
                    });
}

std::vector<double> AggregateOutputs(std::span<const double> raw,
                                     std::size_t num_background) {
  if (num_background == 0 || raw.size() % num_background != 0) {
    throw Error(ErrorCode::kShape,
                std::to_string(raw.size()) +
                    " model outputs cannot be split into blocks of " +
                    std::to_string(num_background));
  }
  std::vector<double> out(raw.size() / num_background);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < num_background; ++i) {
      sum += raw[k * num_background + i];
    }
    out[k] = sum / static_cast<double>(num_background);
  }
  return out;
}

}  // namespace shapbox
