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

#include "shapbox/shapbox.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/explainer.hpp"
#include "data/dataset.hpp"
#include "models/model_json.hpp"
#include "models/subprocess_model.hpp"
#include "oracle/exact.hpp"

struct shapbox_model {
  std::shared_ptr<const shapbox::Model> impl;
  std::string type;
};

struct shapbox_dataset {
  shapbox::TabularDataset data;
};

struct shapbox_explanation {
  shapbox::Explanation result;
};

namespace {

thread_local std::string g_last_error;

shapbox_status ToStatus(shapbox::ErrorCode code) {
  using shapbox::ErrorCode;
  switch (code) {
    case ErrorCode::kShape:
      return SHAPBOX_ERR_SHAPE;
    case ErrorCode::kDomain:
      return SHAPBOX_ERR_DOMAIN;
    case ErrorCode::kConfig:
      return SHAPBOX_ERR_CONFIG;
    case ErrorCode::kNumeric:
      return SHAPBOX_ERR_NUMERIC;
    case ErrorCode::kContract:
      return SHAPBOX_ERR_CONTRACT;
    case ErrorCode::kUnsupportedModel:
      return SHAPBOX_ERR_UNSUPPORTED_MODEL;
    case ErrorCode::kValidation:
      return SHAPBOX_ERR_VALIDATION;
    case ErrorCode::kIngestion:
      return SHAPBOX_ERR_INGESTION;
    case ErrorCode::kAdapter:
      return SHAPBOX_ERR_ADAPTER;
    case ErrorCode::kCostGuard:
      return SHAPBOX_ERR_COST_GUARD;
    case ErrorCode::kIo:
      return SHAPBOX_ERR_IO;
  }
  return SHAPBOX_ERR_INTERNAL;
}

shapbox_status Fail(shapbox_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body and converts any escaping exception into a status code.
template <typename Body>
shapbox_status Guard(Body&& body) {
  try {
    body();
    return SHAPBOX_OK;
  } catch (const shapbox::Error& e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SHAPBOX_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SHAPBOX_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SHAPBOX_ERR_INTERNAL, "unknown exception");
  }
}

#define SHAPBOX_REQUIRE(ptr)                                          \
  do {                                                                \
    if ((ptr) == nullptr) {                                           \
      return Fail(SHAPBOX_ERR_INVALID_ARGUMENT, #ptr " must not be null"); \
    }                                                                 \
  } while (0)

char* CopyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

shapbox_model* WrapModel(std::shared_ptr<const shapbox::Model> impl) {
  auto* m = new shapbox_model;
  m->type = impl->type_name();
  m->impl = std::move(impl);
  return m;
}

shapbox_dataset* WrapBackground(const shapbox::TabularDataset& source,
                                shapbox::Matrix rows) {
  auto* out = new shapbox_dataset;
  out->data.feature_names = source.feature_names;
  out->data.features = source.features;
  out->data.rows = std::move(rows);
  return out;
}

}  // namespace

extern "C" {

const char* shapbox_version(void) { return "1.0.0"; }

const char* shapbox_last_error(void) { return g_last_error.c_str(); }

const char* shapbox_status_name(shapbox_status status) {
  switch (status) {
    case SHAPBOX_OK:
      return "ok";
    case SHAPBOX_ERR_INVALID_ARGUMENT:
      return "invalid_argument";
    case SHAPBOX_ERR_SHAPE:
      return "shape_error";
    case SHAPBOX_ERR_DOMAIN:
      return "domain_error";
    case SHAPBOX_ERR_CONFIG:
      return "config_error";
    case SHAPBOX_ERR_NUMERIC:
      return "numeric_error";
    case SHAPBOX_ERR_CONTRACT:
      return "contract_error";
    case SHAPBOX_ERR_UNSUPPORTED_MODEL:
      return "unsupported_model";
    case SHAPBOX_ERR_VALIDATION:
      return "validation_error";
    case SHAPBOX_ERR_INGESTION:
      return "ingestion_error";
    case SHAPBOX_ERR_ADAPTER:
      return "adapter_error";
    case SHAPBOX_ERR_COST_GUARD:
      return "cost_guard";
    case SHAPBOX_ERR_IO:
      return "io_error";
    case SHAPBOX_ERR_INTERNAL:
      return "internal_error";
  }
  return "unknown";
}

void shapbox_string_free(char* str) { delete[] str; }

shapbox_status shapbox_model_load_file(const char* path, shapbox_model** out) {
  SHAPBOX_REQUIRE(path);
  SHAPBOX_REQUIRE(out);
  return Guard([&] { *out = WrapModel(shapbox::LoadModelFile(path)); });
}

shapbox_status shapbox_model_load_json(const char* json_text,
                                       shapbox_model** out) {
  SHAPBOX_REQUIRE(json_text);
  SHAPBOX_REQUIRE(out);
  return Guard([&] { *out = WrapModel(shapbox::ParseModelText(json_text)); });
}

shapbox_status shapbox_model_from_subprocess(const char* command,
                                             double timeout_ms, size_t width,
                                             shapbox_model** out) {
  SHAPBOX_REQUIRE(command);
  SHAPBOX_REQUIRE(out);
  if (!(timeout_ms > 0.0) || !std::isfinite(timeout_ms)) {
    return Fail(SHAPBOX_ERR_CONFIG, "timeout must be a positive number of ms");
  }
  return Guard([&] {
    const auto timeout = std::chrono::milliseconds(
        static_cast<std::int64_t>(std::ceil(timeout_ms)));
    *out = WrapModel(
        std::make_shared<shapbox::SubprocessModel>(command, timeout, width));
  });
}

shapbox_status shapbox_model_from_callback(shapbox_predict_fn fn,
                                           void* user_data, size_t width,
                                           shapbox_model** out) {
  SHAPBOX_REQUIRE(fn);
  SHAPBOX_REQUIRE(out);
  return Guard([&] {
    auto call = [fn, user_data](const shapbox::Matrix& rows) {
      std::vector<double> preds(rows.rows(), 0.0);
      const int rc = fn(user_data, rows.data().data(), rows.rows(), rows.cols(),
                        preds.data());
      if (rc != 0) {
        throw shapbox::Error(shapbox::ErrorCode::kAdapter,
                             "prediction callback returned " +
                                 std::to_string(rc));
      }
      return preds;
    };
    *out = WrapModel(
        std::make_shared<shapbox::FunctionModel>(call, width, "callback"));
  });
}

void shapbox_model_free(shapbox_model* model) { delete model; }

size_t shapbox_model_width(const shapbox_model* model) {
  return model ? model->impl->num_features() : 0;
}

const char* shapbox_model_type(const shapbox_model* model) {
  return model ? model->type.c_str() : "";
}

shapbox_status shapbox_model_predict(const shapbox_model* model,
                                     const double* rows, size_t n_rows,
                                     size_t n_cols, double* out) {
  SHAPBOX_REQUIRE(model);
  if (n_rows > 0) {
    SHAPBOX_REQUIRE(rows);
    SHAPBOX_REQUIRE(out);
  }
  return Guard([&] {
    shapbox::Matrix batch(n_rows, n_cols,
                          std::vector<double>(rows, rows + n_rows * n_cols));
    shapbox::CheckModelWidth(*model->impl, n_cols);
    const auto preds = shapbox::EvaluateModel(*model->impl, batch);
    shapbox::CheckFinitePredictions(preds);
    std::copy(preds.begin(), preds.end(), out);
  });
}

shapbox_status shapbox_model_to_json(const shapbox_model* model, char** out) {
  SHAPBOX_REQUIRE(model);
  SHAPBOX_REQUIRE(out);
  return Guard(
      [&] { *out = CopyString(shapbox::SerializeModel(*model->impl).dump()); });
}

shapbox_status shapbox_dataset_load_csv(const char* csv_path,
                                        const char* metadata_path,
                                        shapbox_dataset** out) {
  SHAPBOX_REQUIRE(csv_path);
  SHAPBOX_REQUIRE(out);
  return Guard([&] {
    std::optional<std::string> meta;
    if (metadata_path != nullptr) meta = metadata_path;
    auto* ds = new shapbox_dataset;
    try {
      ds->data = shapbox::LoadCsvDataset(csv_path, meta);
    } catch (...) {
      delete ds;
      throw;
    }
    *out = ds;
  });
}

shapbox_status shapbox_dataset_from_rows(const double* rows, size_t n_rows,
                                         size_t n_cols, shapbox_dataset** out) {
  SHAPBOX_REQUIRE(out);
  if (n_rows > 0 && n_cols > 0) SHAPBOX_REQUIRE(rows);
  return Guard([&] {
    if (n_cols == 0) {
      throw shapbox::Error(shapbox::ErrorCode::kShape,
                           "dataset needs at least one column");
    }
    shapbox::Matrix m(n_rows, n_cols,
                      std::vector<double>(rows, rows + n_rows * n_cols));
    auto data = shapbox::DatasetFromMatrix(std::move(m));
    *out = new shapbox_dataset{std::move(data)};
  });
}

void shapbox_dataset_free(shapbox_dataset* dataset) { delete dataset; }

size_t shapbox_dataset_rows(const shapbox_dataset* dataset) {
  return dataset ? dataset->data.num_rows() : 0;
}

size_t shapbox_dataset_cols(const shapbox_dataset* dataset) {
  return dataset ? dataset->data.num_features() : 0;
}

const double* shapbox_dataset_data(const shapbox_dataset* dataset) {
  return dataset ? dataset->data.rows.data().data() : nullptr;
}

const char* shapbox_dataset_feature_name(const shapbox_dataset* dataset,
                                         size_t index) {
  if (dataset == nullptr || index >= dataset->data.num_features()) return nullptr;
  return dataset->data.feature_names[index].c_str();
}

shapbox_status shapbox_dataset_metadata_json(const shapbox_dataset* dataset,
                                             char** out) {
  SHAPBOX_REQUIRE(dataset);
  SHAPBOX_REQUIRE(out);
  return Guard([&] {
    const auto& data = dataset->data;
    nlohmann::json doc;
    doc["label"] = data.label_name ? nlohmann::json(*data.label_name)
                                   : nlohmann::json(nullptr);
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t j = 0; j < data.num_features(); ++j) {
      nlohmann::json f = {{"name", data.feature_names[j]},
                          {"display_name", data.features[j].display_name}};
      if (data.features[j].categorical()) {
        nlohmann::json cats = nlohmann::json::object();
        for (const auto& [code, label] : data.features[j].categories) {
          cats[std::to_string(code)] = label;
        }
        f["categories"] = std::move(cats);
      }
      features.push_back(std::move(f));
    }
    doc["features"] = std::move(features);
    *out = CopyString(doc.dump());
  });
}

shapbox_status shapbox_dataset_median(const shapbox_dataset* data,
                                      shapbox_dataset** out) {
  SHAPBOX_REQUIRE(data);
  SHAPBOX_REQUIRE(out);
  return Guard([&] {
    shapbox::BackgroundSpec spec;
    spec.mode = shapbox::BackgroundMode::kMedian;
    *out = WrapBackground(data->data,
                          shapbox::SummarizeBackground(data->data, spec));
  });
}

shapbox_status shapbox_dataset_sample(const shapbox_dataset* data, size_t k,
                                      uint64_t seed, shapbox_dataset** out) {
  SHAPBOX_REQUIRE(data);
  SHAPBOX_REQUIRE(out);
  return Guard([&] {
    shapbox::BackgroundSpec spec;
    spec.mode = shapbox::BackgroundMode::kSample;
    spec.sample_size = k;
    spec.seed = seed;
    *out = WrapBackground(data->data,
                          shapbox::SummarizeBackground(data->data, spec));
  });
}

void shapbox_explain_options_init(shapbox_explain_options* options) {
  if (options == nullptr) return;
  options->n_samples = SHAPBOX_SAMPLES_AUTO;
  options->seed = 0;
  options->vary_tolerance = 1e-8;
}

shapbox_status shapbox_explain(const shapbox_model* model,
                               const double* instance, size_t n_features,
                               const shapbox_dataset* background,
                               const shapbox_explain_options* options,
                               shapbox_explanation** out) {
  SHAPBOX_REQUIRE(model);
  SHAPBOX_REQUIRE(instance);
  SHAPBOX_REQUIRE(background);
  SHAPBOX_REQUIRE(out);
  shapbox_explain_options opts;
  shapbox_explain_options_init(&opts);
  if (options != nullptr) opts = *options;
  return Guard([&] {
    shapbox::ExplainerConfig config;
    if (opts.n_samples != SHAPBOX_SAMPLES_AUTO) config.n_samples = opts.n_samples;
    config.seed = opts.seed;
    config.vary_tolerance = opts.vary_tolerance;
    auto result = shapbox::Explain(*model->impl, {instance, n_features},
                                   background->data.rows, config);
    *out = new shapbox_explanation{std::move(result)};
  });
}

shapbox_status shapbox_exact_shapley(const shapbox_model* model,
                                     const double* instance, size_t n_features,
                                     const shapbox_dataset* background,
                                     double vary_tolerance,
                                     shapbox_explanation** out) {
  SHAPBOX_REQUIRE(model);
  SHAPBOX_REQUIRE(instance);
  SHAPBOX_REQUIRE(background);
  SHAPBOX_REQUIRE(out);
  return Guard([&] {
    auto result = shapbox::ExactShapley(*model->impl, {instance, n_features},
                                        background->data.rows, vary_tolerance);
    *out = new shapbox_explanation{std::move(result)};
  });
}

void shapbox_explanation_free(shapbox_explanation* explanation) {
  delete explanation;
}

size_t shapbox_explanation_num_features(const shapbox_explanation* explanation) {
  return explanation ? explanation->result.phi.size() : 0;
}

const double* shapbox_explanation_phi(const shapbox_explanation* explanation) {
  return explanation ? explanation->result.phi.data() : nullptr;
}

double shapbox_explanation_base_value(const shapbox_explanation* explanation) {
  return explanation ? explanation->result.base_value : std::nan("");
}

double shapbox_explanation_prediction(const shapbox_explanation* explanation) {
  return explanation ? explanation->result.prediction : std::nan("");
}

int64_t shapbox_explanation_samples_used(const shapbox_explanation* explanation) {
  return explanation ? explanation->result.samples_used : 0;
}

uint64_t shapbox_explanation_seed(const shapbox_explanation* explanation) {
  return explanation ? explanation->result.seed : 0;
}

int shapbox_explanation_is_varying(const shapbox_explanation* explanation,
                                   size_t index) {
  if (explanation == nullptr || index >= explanation->result.varying_mask.size()) {
    return 0;
  }
  return explanation->result.varying_mask[index] ? 1 : 0;
}

unsigned shapbox_explanation_flags(const shapbox_explanation* explanation) {
  if (explanation == nullptr) return 0;
  unsigned flags = 0;
  if (explanation->result.no_varying_features) {
    flags |= SHAPBOX_FLAG_NO_VARYING_FEATURES;
  }
  if (explanation->result.full_enumeration) flags |= SHAPBOX_FLAG_FULL_ENUMERATION;
  return flags;
}

}  // extern "C"
