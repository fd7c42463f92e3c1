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

#ifndef SHAPBOX_DATA_DATASET_HPP_
#define SHAPBOX_DATA_DATASET_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace shapbox {

struct FeatureInfo {
  std::string display_name;
  // Present for categorical features: integer code -> label.
  std::map<std::int64_t, std::string> categories;

  bool categorical() const { return !categories.empty(); }
};

// Tabular data with numerically encoded features. Categorical columns hold
// integer codes declared in the metadata sidecar.
struct TabularDataset {
  std::vector<std::string> feature_names;
  Matrix rows;
  std::optional<std::string> label_name;
  std::vector<double> labels;  // empty without a label column
  std::vector<FeatureInfo> features;  // parallel to feature_names

  std::size_t num_features() const { return feature_names.size(); }
  std::size_t num_rows() const { return rows.rows(); }
};

// Builds a dataset from raw rows with generated names f0, f1, ...
TabularDataset DatasetFromMatrix(Matrix rows,
                                 std::vector<std::string> feature_names = {});

// CSV with a header row. The optional sidecar JSON looks like
//   {"label": "loan_status",
//    "features": {"term": {"display_name": "Term",
//                          "categories": {"0": "36 months", "1": "60 months"}}}}
// and removes the label column from the feature matrix.
TabularDataset LoadCsvDataset(const std::string& csv_path,
                              const std::optional<std::string>& metadata_path =
                                  std::nullopt);

TabularDataset ParseCsvDataset(const std::string& csv_text,
                               const std::optional<std::string>& metadata_json =
                                   std::nullopt);

enum class BackgroundMode { kMedian, kSample };

struct BackgroundSpec {
  BackgroundMode mode = BackgroundMode::kMedian;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;
};

// kMedian: one row of per-column medians (mean of the two central values for
// even counts). kSample: sample_size rows drawn without replacement, in
// dataset order, deterministic for the seed.
Matrix SummarizeBackground(const TabularDataset& data,
                           const BackgroundSpec& spec);

}  // namespace shapbox

#endif  // SHAPBOX_DATA_DATASET_HPP_
