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

#include "core/error.hpp"

namespace shapbox {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShape:
      return "shape_error";
    case ErrorCode::kDomain:
      return "domain_error";
    case ErrorCode::kConfig:
      return "config_error";
    case ErrorCode::kNumeric:
      return "numeric_error";
    case ErrorCode::kContract:
      return "contract_error";
    case ErrorCode::kUnsupportedModel:
      return "unsupported_model";
    case ErrorCode::kValidation:
      return "validation_error";
    case ErrorCode::kIngestion:
      return "ingestion_error";
    case ErrorCode::kAdapter:
      return "adapter_error";
    case ErrorCode::kCostGuard:
      return "cost_guard";
    case ErrorCode::kIo:
      return "io_error";
  }
  return "unknown_error";
}

}  // namespace shapbox
