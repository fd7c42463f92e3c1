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

#ifndef SHAPBOX_TOOLS_APP_ENGINE_HPP_
#define SHAPBOX_TOOLS_APP_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "app/handles.hpp"

namespace shapbox::app {

struct BackgroundMode {
  enum Kind { kFull, kMedian, kSample } kind = kFull;
  std::size_t sample_size = 0;
  std::uint64_t seed = 0;

  // "full", "median" or "sample:k:seed".
  static BackgroundMode Parse(const std::string& text);
  std::string ToString() const;
};

struct EngineConfig {
  std::string model_path;    // built-in model document
  std::string model_command; // or an external model process
  double model_timeout_ms = 30000;
  std::string background_path;
  std::string metadata_path;  // optional sidecar
  BackgroundMode background_mode;
  std::optional<std::int64_t> default_samples;  // empty: AUTO
};

struct ExplainRequest {
  std::vector<double> instance;
  std::optional<std::int64_t> samples;
  std::uint64_t seed = 0;
};

struct ExplainResult {
  double prediction = 0;
  double base_value = 0;
  std::vector<double> phi;
  std::int64_t samples_used = 0;
  double elapsed_ms = 0;
};

// Model plus summarized background, shared by the CLI and the service.
// Safe for concurrent Explain/Predict calls.
class Engine {
 public:
  explicit Engine(const EngineConfig& config);

  ExplainResult Explain(const ExplainRequest& request) const;
  double Predict(const std::vector<double>& instance) const;

  nlohmann::json ExplainJson(const ExplainResult& result) const;
  nlohmann::json Metadata() const;

  std::size_t num_features() const { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const shapbox_model* model() const { return model_.get(); }
  const shapbox_dataset* background() const { return background_.get(); }

 private:
  void CheckWidth(const std::vector<double>& instance) const;

  EngineConfig config_;
  ModelPtr model_;
  DatasetPtr source_;
  DatasetPtr background_;
  std::vector<std::string> feature_names_;
  nlohmann::json feature_meta_;
};

// Request body parsing; failures carry the offending field.
ExplainRequest ParseExplainRequest(const nlohmann::json& body);
std::vector<double> ParseInstance(const nlohmann::json& value,
                                  const std::string& field);
// "auto" maps to SHAPBOX_SAMPLES_AUTO.
std::int64_t ParseSamples(const std::string& text);

}  // namespace shapbox::app

#endif  // SHAPBOX_TOOLS_APP_ENGINE_HPP_
