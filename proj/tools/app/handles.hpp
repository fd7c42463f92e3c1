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

#ifndef SHAPBOX_TOOLS_APP_HANDLES_HPP_
#define SHAPBOX_TOOLS_APP_HANDLES_HPP_

#include <memory>
#include <stdexcept>
#include <string>

#include "shapbox/shapbox.h"

namespace shapbox::app {

struct ModelDeleter {
  void operator()(shapbox_model* m) const { shapbox_model_free(m); }
};
struct DatasetDeleter {
  void operator()(shapbox_dataset* d) const { shapbox_dataset_free(d); }
};
struct ExplanationDeleter {
  void operator()(shapbox_explanation* e) const { shapbox_explanation_free(e); }
};
struct StringDeleter {
  void operator()(char* s) const { shapbox_string_free(s); }
};

using ModelPtr = std::unique_ptr<shapbox_model, ModelDeleter>;
using DatasetPtr = std::unique_ptr<shapbox_dataset, DatasetDeleter>;
using ExplanationPtr = std::unique_ptr<shapbox_explanation, ExplanationDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

// Where a failure came from decides the CLI exit code and HTTP status.
enum class Origin { kInput, kModel };

class AppError : public std::runtime_error {
 public:
  AppError(shapbox_status status, Origin origin, std::string message,
           std::string field = {})
      : std::runtime_error(std::move(message)),
        status_(status),
        origin_(origin),
        field_(std::move(field)) {}

  shapbox_status status() const { return status_; }
  Origin origin() const { return origin_; }
  const std::string& field() const { return field_; }
  std::string code() const { return shapbox_status_name(status_); }

 private:
  shapbox_status status_;
  Origin origin_;
  std::string field_;
};

// Errors raised while evaluating the model, as opposed to bad inputs.
inline bool IsModelStatus(shapbox_status s) {
  return s == SHAPBOX_ERR_NUMERIC || s == SHAPBOX_ERR_CONTRACT ||
         s == SHAPBOX_ERR_ADAPTER || s == SHAPBOX_ERR_UNSUPPORTED_MODEL ||
         s == SHAPBOX_ERR_INTERNAL;
}

inline void Check(shapbox_status s, Origin origin, const std::string& context,
                  const std::string& field = {}) {
  if (s == SHAPBOX_OK) return;
  std::string msg = shapbox_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw AppError(s, origin, std::move(msg), field);
}

}  // namespace shapbox::app

#endif  // SHAPBOX_TOOLS_APP_HANDLES_HPP_
