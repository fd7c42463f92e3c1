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

#include "app/engine.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>

namespace shapbox::app {
namespace {

AppError BadArgument(const std::string& message, const std::string& field) {
  return AppError(SHAPBOX_ERR_INVALID_ARGUMENT, Origin::kInput, message, field);
}

template <typename T>
bool ParseInteger(const std::string& text, T& out) {
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end && !text.empty();
}

}  // namespace

BackgroundMode BackgroundMode::Parse(const std::string& text) {
  BackgroundMode mode;
  if (text == "full") return mode;
  if (text == "median") {
    mode.kind = kMedian;
    return mode;
  }
  if (text.rfind("sample:", 0) == 0) {
    const auto rest = text.substr(7);
    const auto colon = rest.find(':');
    mode.kind = kSample;
    const std::string k = rest.substr(0, colon);
    const std::string seed = colon == std::string::npos ? "0" : rest.substr(colon + 1);
    if (ParseInteger(k, mode.sample_size) && ParseInteger(seed, mode.seed) &&
        mode.sample_size > 0) {
      return mode;
    }
  }
  throw BadArgument("background mode must be full, median or sample:k:seed, got '" +
                        text + "'",
                    "background_mode");
}

std::string BackgroundMode::ToString() const {
  switch (kind) {
    case kFull:
      return "full";
    case kMedian:
      return "median";
    case kSample:
      return "sample:" + std::to_string(sample_size) + ":" + std::to_string(seed);
  }
  return "full";
}

Engine::Engine(const EngineConfig& config) : config_(config) {
  if (config.model_path.empty() == config.model_command.empty()) {
    throw BadArgument("exactly one of a model file or a model command is required",
                      "model");
  }
  if (config.background_path.empty()) {
    throw BadArgument("a background dataset is required", "background");
  }

  shapbox_dataset* source = nullptr;
  Check(shapbox_dataset_load_csv(
            config.background_path.c_str(),
            config.metadata_path.empty() ? nullptr : config.metadata_path.c_str(),
            &source),
        Origin::kInput, "background", "background");
  source_.reset(source);
  const std::size_t cols = shapbox_dataset_cols(source);
  for (std::size_t j = 0; j < cols; ++j) {
    feature_names_.emplace_back(shapbox_dataset_feature_name(source, j));
  }

  shapbox_model* model = nullptr;
  if (!config.model_path.empty()) {
    Check(shapbox_model_load_file(config.model_path.c_str(), &model), Origin::kModel,
          "model", "model");
  } else {
    Check(shapbox_model_from_subprocess(config.model_command.c_str(),
                                        config.model_timeout_ms, cols, &model),
          Origin::kModel, "model", "model");
  }
  model_.reset(model);
  const std::size_t width = shapbox_model_width(model);
  if (width != 0 && width != cols) {
    throw AppError(SHAPBOX_ERR_SHAPE, Origin::kInput,
                   "model expects " + std::to_string(width) +
                       " features but the background has " + std::to_string(cols),
                   "background");
  }

  shapbox_dataset* bg = nullptr;
  const auto& mode = config.background_mode;
  switch (mode.kind) {
    case BackgroundMode::kFull:
      Check(shapbox_dataset_from_rows(shapbox_dataset_data(source),
                                      shapbox_dataset_rows(source), cols, &bg),
            Origin::kInput, "background", "background");
      break;
    case BackgroundMode::kMedian:
      Check(shapbox_dataset_median(source, &bg), Origin::kInput, "background",
            "background_mode");
      break;
    case BackgroundMode::kSample:
      Check(shapbox_dataset_sample(source, mode.sample_size, mode.seed, &bg),
            Origin::kInput, "background", "background_mode");
      break;
  }
  background_.reset(bg);

  char* meta = nullptr;
  Check(shapbox_dataset_metadata_json(source, &meta), Origin::kInput, "metadata");
  const StringPtr meta_owner(meta);
  feature_meta_ = nlohmann::json::parse(meta);
}

void Engine::CheckWidth(const std::vector<double>& instance) const {
  if (instance.size() != num_features()) {
    throw AppError(SHAPBOX_ERR_SHAPE, Origin::kInput,
                   "instance has " + std::to_string(instance.size()) +
                       " features, model expects " + std::to_string(num_features()),
                   "instance");
  }
}

ExplainResult Engine::Explain(const ExplainRequest& request) const {
  CheckWidth(request.instance);
  shapbox_explain_options options;
  shapbox_explain_options_init(&options);
  if (request.samples) {
    options.n_samples = *request.samples;
  } else if (config_.default_samples) {
    options.n_samples = *config_.default_samples;
  }
  options.seed = request.seed;

  shapbox_explanation* raw = nullptr;
  const auto start = std::chrono::steady_clock::now();
  const shapbox_status s =
      shapbox_explain(model_.get(), request.instance.data(), request.instance.size(),
                      background_.get(), &options, &raw);
  const auto stop = std::chrono::steady_clock::now();
  if (s != SHAPBOX_OK) {
    const std::string field = s == SHAPBOX_ERR_CONFIG ? "samples"
                              : s == SHAPBOX_ERR_SHAPE ? "instance"
                                                       : "";
    Check(s, IsModelStatus(s) ? Origin::kModel : Origin::kInput, "explain", field);
  }
  const ExplanationPtr ex(raw);

  ExplainResult result;
  result.prediction = shapbox_explanation_prediction(raw);
  result.base_value = shapbox_explanation_base_value(raw);
  const double* phi = shapbox_explanation_phi(raw);
  result.phi.assign(phi, phi + shapbox_explanation_num_features(raw));
  result.samples_used = shapbox_explanation_samples_used(raw);
  result.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();

  double total = result.base_value;
  for (double v : result.phi) total += v;
  const double gap = std::abs(total - result.prediction);
  if (!(gap <= 1e-9 * std::max(1.0, std::abs(result.prediction)))) {
    throw AppError(SHAPBOX_ERR_INTERNAL, Origin::kModel,
                   "attributions do not add up to the prediction (gap " +
                       std::to_string(gap) + ")");
  }
  return result;
}

double Engine::Predict(const std::vector<double>& instance) const {
  CheckWidth(instance);
  double out = 0;
  const shapbox_status s =
      shapbox_model_predict(model_.get(), instance.data(), 1, instance.size(), &out);
  if (s != SHAPBOX_OK) {
    Check(s, IsModelStatus(s) ? Origin::kModel : Origin::kInput, "predict",
          s == SHAPBOX_ERR_SHAPE ? "instance" : "");
  }
  return out;
}

nlohmann::json Engine::ExplainJson(const ExplainResult& result) const {
  return {{"prediction", result.prediction},
          {"base_value", result.base_value},
          {"phi", result.phi},
          {"feature_names", feature_names_},
          {"samples_used", result.samples_used},
          {"elapsed_ms", result.elapsed_ms}};
}

nlohmann::json Engine::Metadata() const {
  const std::size_t m = num_features();
  const std::size_t n = shapbox_dataset_rows(source_.get());
  const double* data = shapbox_dataset_data(source_.get());
  const std::size_t bg_rows = shapbox_dataset_rows(background_.get());
  const double* bg = shapbox_dataset_data(background_.get());

  nlohmann::json features = feature_meta_.value("features", nlohmann::json::array());
  std::vector<double> mean(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < n; ++r) {
      lo = std::min(lo, data[r * m + j]);
      hi = std::max(hi, data[r * m + j]);
    }
    for (std::size_t r = 0; r < bg_rows; ++r) mean[j] += bg[r * m + j];
    mean[j] /= static_cast<double>(bg_rows);
    if (j < features.size()) {
      features[j]["min"] = lo;
      features[j]["max"] = hi;
    }
  }

  nlohmann::json background = {{"mode", config_.background_mode.ToString()},
                               {"rows", bg_rows},
                               {"source_rows", n},
                               {"mean", mean}};
  if (bg_rows <= 16) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < bg_rows; ++r) {
      rows.push_back(std::vector<double>(bg + r * m, bg + (r + 1) * m));
    }
    background["values"] = rows;
  }

  nlohmann::json samples = "auto";
  if (config_.default_samples && *config_.default_samples != SHAPBOX_SAMPLES_AUTO) {
    samples = *config_.default_samples;
  }
  return {{"feature_names", feature_names_},
          {"M", m},
          {"model_type", shapbox_model_type(model_.get())},
          {"label", feature_meta_.value("label", nlohmann::json())},
          {"features", features},
          {"background", background},
          {"default_samples", samples}};
}

std::vector<double> ParseInstance(const nlohmann::json& value,
                                  const std::string& field) {
  if (!value.is_array()) throw BadArgument(field + " must be an array of numbers", field);
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t j = 0; j < value.size(); ++j) {
    const auto& v = value[j];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw BadArgument(field + "[" + std::to_string(j) + "] must be a finite number",
                        field);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

ExplainRequest ParseExplainRequest(const nlohmann::json& body) {
  if (!body.is_object()) throw BadArgument("request body must be a JSON object", "");
  if (!body.contains("instance")) throw BadArgument("instance is required", "instance");
  ExplainRequest request;
  request.instance = ParseInstance(body["instance"], "instance");
  if (body.contains("samples") && !body["samples"].is_null()) {
    const auto& s = body["samples"];
    if (s.is_string()) {
      request.samples = ParseSamples(s.get<std::string>());
    } else if (s.is_number_integer()) {
      request.samples = s.get<std::int64_t>();
    } else {
      throw BadArgument("samples must be an integer or \"auto\"", "samples");
    }
  }
  if (body.contains("seed") && !body["seed"].is_null()) {
    const auto& s = body["seed"];
    if (!s.is_number_unsigned()) {
      throw BadArgument("seed must be a non-negative integer", "seed");
    }
    request.seed = s.get<std::uint64_t>();
  }
  return request;
}

std::int64_t ParseSamples(const std::string& text) {
  if (text == "auto") return SHAPBOX_SAMPLES_AUTO;
  std::int64_t n = 0;
  if (!ParseInteger(text, n)) {
    throw BadArgument("samples must be an integer or 'auto', got '" + text + "'",
                      "samples");
  }
  return n;
}

}  // namespace shapbox::app
