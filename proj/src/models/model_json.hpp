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

#ifndef SHAPBOX_MODELS_MODEL_JSON_HPP_
#define SHAPBOX_MODELS_MODEL_JSON_HPP_

#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "core/model.hpp"

namespace shapbox {

// Model documents:
//   {"type":"linear","weights":[...],"bias":r}
//   {"type":"gbdt","base_score":r,"transform":"identity"|"sigmoid",
//    "num_features":k (optional),
//    "trees":[{"root":i,"nodes":[{"feature":i,"threshold":r,"left":i,"right":i}
//                                | {"leaf":r}, ...]}, ...]}
// Errors carry the JSON path of the offending field.
std::shared_ptr<const Model> ParseModel(const nlohmann::json& doc);
std::shared_ptr<const Model> ParseModelText(std::string_view text);
std::shared_ptr<const Model> LoadModelFile(const std::string& path);

// Inverse of ParseModel for the built-in adapters; kUnsupportedModel for
// anything else.
nlohmann::json SerializeModel(const Model& model);

}  // namespace shapbox

#endif  // SHAPBOX_MODELS_MODEL_JSON_HPP_
