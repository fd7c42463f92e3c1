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

#ifndef SHAPBOX_CORE_ERROR_HPP_
#define SHAPBOX_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace shapbox {

// Error categories. The C API maps each one onto a shapbox_status value.
enum class ErrorCode {
  kShape,             // widths or lengths disagree
  kDomain,            // argument outside the mathematical domain
  kConfig,            // invalid explainer/service configuration
  kNumeric,           // non-finite value produced or consumed
  kContract,          // a model broke the batch-prediction contract
  kUnsupportedModel,  // unknown model "type"
  kValidation,        // malformed model or metadata document
  kIngestion,         // dataset could not be read or is empty
  kAdapter,           // subprocess adapter failure (timeout, pipe, protocol)
  kCostGuard,         // exact computation refused for too many features
  kIo,                // filesystem errors
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shapbox

#endif  // SHAPBOX_CORE_ERROR_HPP_
