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

/*
 * shapbox C API.
 *
 * Kernel SHAP attributions for any batch-prediction model. All objects are
 * opaque handles owned by the caller and released with the matching *_free
 * function. Every fallible call returns a shapbox_status; on failure a
 * human-readable message is available from shapbox_last_error() on the same
 * thread until the next failing call.
 *
 * Minimal use:
 *
 *   shapbox_model* model;
 *   shapbox_dataset* background;
 *   shapbox_explanation* ex;
 *   shapbox_model_load_file("model.json", &model);
 *   shapbox_dataset_from_rows(bg_rows, 1, 4, &background);
 *   shapbox_explain(model, x, 4, background, NULL, &ex);
 *   const double* phi = shapbox_explanation_phi(ex);
 */

#ifndef SHAPBOX_SHAPBOX_H_
#define SHAPBOX_SHAPBOX_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SHAPBOX_BUILDING_LIBRARY)
#define SHAPBOX_API __declspec(dllexport)
#else
#define SHAPBOX_API __declspec(dllimport)
#endif
#else
#define SHAPBOX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum shapbox_status {
  SHAPBOX_OK = 0,
  SHAPBOX_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer */
  SHAPBOX_ERR_SHAPE = 2,            /* widths or lengths disagree */
  SHAPBOX_ERR_DOMAIN = 3,
  SHAPBOX_ERR_CONFIG = 4,           /* e.g. sample budget below 2 */
  SHAPBOX_ERR_NUMERIC = 5,          /* non-finite input or model output */
  SHAPBOX_ERR_CONTRACT = 6,         /* model returned the wrong number of rows */
  SHAPBOX_ERR_UNSUPPORTED_MODEL = 7,
  SHAPBOX_ERR_VALIDATION = 8,       /* malformed model or metadata document */
  SHAPBOX_ERR_INGESTION = 9,        /* unreadable or empty dataset */
  SHAPBOX_ERR_ADAPTER = 10,         /* subprocess/callback model failure */
  SHAPBOX_ERR_COST_GUARD = 11,      /* too many features for exact Shapley */
  SHAPBOX_ERR_IO = 12,
  SHAPBOX_ERR_INTERNAL = 13
} shapbox_status;

/* Pass as shapbox_explain_options.n_samples to pick
 * min(2^M_v - 2, 2 * M_v + 2048) coalitions. */
#define SHAPBOX_SAMPLES_AUTO (-1)

/* Explanation flags. */
#define SHAPBOX_FLAG_NO_VARYING_FEATURES 0x1u
#define SHAPBOX_FLAG_FULL_ENUMERATION 0x2u

typedef struct shapbox_model shapbox_model;
typedef struct shapbox_dataset shapbox_dataset;
typedef struct shapbox_explanation shapbox_explanation;

/* Batch prediction callback: rows is n_rows x n_cols, row-major; write one
 * prediction per row into out. Return 0 on success. */
typedef int (*shapbox_predict_fn)(void* user_data, const double* rows,
                                  size_t n_rows, size_t n_cols, double* out);

typedef struct shapbox_explain_options {
  int64_t n_samples; /* SHAPBOX_SAMPLES_AUTO or >= 2 */
  uint64_t seed;
  double vary_tolerance; /* absolute; default 1e-8 */
} shapbox_explain_options;

SHAPBOX_API const char* shapbox_version(void);
SHAPBOX_API const char* shapbox_last_error(void);
SHAPBOX_API const char* shapbox_status_name(shapbox_status status);
SHAPBOX_API void shapbox_string_free(char* str);

/* ---- models ------------------------------------------------------------ */

SHAPBOX_API shapbox_status shapbox_model_load_file(const char* path,
                                                   shapbox_model** out);
SHAPBOX_API shapbox_status shapbox_model_load_json(const char* json_text,
                                                   shapbox_model** out);
/* Child process speaking the newline-delimited JSON protocol. width may be 0
 * when unknown. */
SHAPBOX_API shapbox_status shapbox_model_from_subprocess(
    const char* command, double timeout_ms, size_t width, shapbox_model** out);
SHAPBOX_API shapbox_status shapbox_model_from_callback(
    shapbox_predict_fn fn, void* user_data, size_t width, shapbox_model** out);
SHAPBOX_API void shapbox_model_free(shapbox_model* model);

/* 0 when the model accepts any width. */
SHAPBOX_API size_t shapbox_model_width(const shapbox_model* model);
/* "linear", "gbdt", "subprocess" or "callback"; owned by the model. */
SHAPBOX_API const char* shapbox_model_type(const shapbox_model* model);
SHAPBOX_API shapbox_status shapbox_model_predict(const shapbox_model* model,
                                                 const double* rows,
                                                 size_t n_rows, size_t n_cols,
                                                 double* out);
/* Model document for built-in models; free with shapbox_string_free. */
SHAPBOX_API shapbox_status shapbox_model_to_json(const shapbox_model* model,
                                                 char** out);

/* ---- datasets and backgrounds ------------------------------------------ */

/* metadata_path may be NULL. */
SHAPBOX_API shapbox_status shapbox_dataset_load_csv(const char* csv_path,
                                                    const char* metadata_path,
                                                    shapbox_dataset** out);
SHAPBOX_API shapbox_status shapbox_dataset_from_rows(const double* rows,
                                                     size_t n_rows,
                                                     size_t n_cols,
                                                     shapbox_dataset** out);
SHAPBOX_API void shapbox_dataset_free(shapbox_dataset* dataset);
SHAPBOX_API size_t shapbox_dataset_rows(const shapbox_dataset* dataset);
SHAPBOX_API size_t shapbox_dataset_cols(const shapbox_dataset* dataset);
/* Row-major n_rows x n_cols feature values (label column excluded). */
SHAPBOX_API const double* shapbox_dataset_data(const shapbox_dataset* dataset);
SHAPBOX_API const char* shapbox_dataset_feature_name(
    const shapbox_dataset* dataset, size_t index);
/* Feature metadata as a JSON document:
 * {"label": str|null, "features": [{"name","display_name","categories"?}]} */
SHAPBOX_API shapbox_status shapbox_dataset_metadata_json(
    const shapbox_dataset* dataset, char** out);

/* One row of per-column medians. Feature names carry over. */
SHAPBOX_API shapbox_status shapbox_dataset_median(const shapbox_dataset* data,
                                                  shapbox_dataset** out);
/* k rows drawn without replacement, deterministic for the seed. */
SHAPBOX_API shapbox_status shapbox_dataset_sample(const shapbox_dataset* data,
                                                  size_t k, uint64_t seed,
                                                  shapbox_dataset** out);

/* ---- explanations ------------------------------------------------------ */

SHAPBOX_API void shapbox_explain_options_init(shapbox_explain_options* options);

/* options may be NULL for defaults (AUTO budget, seed 0). */
SHAPBOX_API shapbox_status shapbox_explain(
    const shapbox_model* model, const double* instance, size_t n_features,
    const shapbox_dataset* background, const shapbox_explain_options* options,
    shapbox_explanation** out);

/* Brute-force Shapley values over all 2^M_v subsets (M_v <= 20). */
SHAPBOX_API shapbox_status shapbox_exact_shapley(
    const shapbox_model* model, const double* instance, size_t n_features,
    const shapbox_dataset* background, double vary_tolerance,
    shapbox_explanation** out);

SHAPBOX_API void shapbox_explanation_free(shapbox_explanation* explanation);
SHAPBOX_API size_t shapbox_explanation_num_features(
    const shapbox_explanation* explanation);
SHAPBOX_API const double* shapbox_explanation_phi(
    const shapbox_explanation* explanation);
SHAPBOX_API double shapbox_explanation_base_value(
    const shapbox_explanation* explanation);
SHAPBOX_API double shapbox_explanation_prediction(
    const shapbox_explanation* explanation);
SHAPBOX_API int64_t shapbox_explanation_samples_used(
    const shapbox_explanation* explanation);
SHAPBOX_API uint64_t shapbox_explanation_seed(
    const shapbox_explanation* explanation);
SHAPBOX_API int shapbox_explanation_is_varying(
    const shapbox_explanation* explanation, size_t index);
SHAPBOX_API unsigned shapbox_explanation_flags(
    const shapbox_explanation* explanation);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* SHAPBOX_SHAPBOX_H_ */
