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

#include "models/model_json.hpp"

#include <fstream>
#include <sstream>

#include "core/error.hpp"
#include "models/linear_model.hpp"
#include "models/tree_ensemble.hpp"

namespace shapbox {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kValidation, path + ": " + what);
}

const json& Field(const json& obj, const std::string& path,
                  const char* name) {
  if (!obj.is_object()) Invalid(path, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) Invalid(path + "." + name, "missing required field");
  return *it;
}

double Number(const json& value, const std::string& path) {
  if (!value.is_number()) Invalid(path, "expected a number");
  return value.get<double>();
}

int Index(const json& value, const std::string& path) {
  if (!value.is_number_integer()) Invalid(path, "expected an integer");
  const auto v = value.get<std::int64_t>();
  if (v < 0 || v > std::numeric_limits<int>::max()) {
    Invalid(path, "index out of range");
  }
  return static_cast<int>(v);
}

std::shared_ptr<const Model> ParseLinear(const json& doc) {
  const json& weights = Field(doc, "$", "weights");
  if (!weights.is_array()) Invalid("$.weights", "expected an array");
  std::vector<double> w;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    w.push_back(Number(weights[j], "$.weights[" + std::to_string(j) + "]"));
  }
  const double bias = doc.contains("bias") ? Number(doc["bias"], "$.bias") : 0.0;
  return std::make_shared<LinearModel>(std::move(w), bias);
}

TreeNode ParseNode(const json& node, const std::string& path) {
  if (!node.is_object()) Invalid(path, "expected an object");
  TreeNode out;
  if (node.contains("leaf")) {
    out.leaf = Number(node["leaf"], path + ".leaf");
    return out;
  }
  out.feature = Index(Field(node, path, "feature"), path + ".feature");
  out.threshold = Number(Field(node, path, "threshold"), path + ".threshold");
  out.left = Index(Field(node, path, "left"), path + ".left");
  out.right = Index(Field(node, path, "right"), path + ".right");
  return out;
}

std::shared_ptr<const Model> ParseGbdt(const json& doc) {
  const double base_score =
      doc.contains("base_score") ? Number(doc["base_score"], "$.base_score") : 0.0;
  OutputTransform transform = OutputTransform::kIdentity;
  if (doc.contains("transform")) {
    const json& t = doc["transform"];
    if (t == "identity") {
      transform = OutputTransform::kIdentity;
    } else if (t == "sigmoid") {
      transform = OutputTransform::kSigmoid;
    } else {
      Invalid("$.transform", "expected \"identity\" or \"sigmoid\"");
    }
  }
  std::size_t num_features = 0;
  if (doc.contains("num_features")) {
    num_features = static_cast<std::size_t>(
        Index(doc["num_features"], "$.num_features"));
  }
  const json& trees = Field(doc, "$", "trees");
  if (!trees.is_array()) Invalid("$.trees", "expected an array");
  std::vector<Tree> parsed;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::string path = "$.trees[" + std::to_string(t) + "]";
    const json& nodes = Field(trees[t], path, "nodes");
    if (!nodes.is_array()) Invalid(path + ".nodes", "expected an array");
    Tree tree;
    tree.root = trees[t].contains("root")
                    ? Index(trees[t]["root"], path + ".root")
                    : 0;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      tree.nodes.push_back(
          ParseNode(nodes[n], path + ".nodes[" + std::to_string(n) + "]"));
    }
    parsed.push_back(std::move(tree));
  }
  return std::make_shared<TreeEnsembleModel>(std::move(parsed), base_score,
                                             transform, num_features);
}

}  // namespace

std::shared_ptr<const Model> ParseModel(const json& doc) {
  if (!doc.is_object()) Invalid("$", "model document must be a JSON object");
  const json& type = Field(doc, "$", "type");
  if (!type.is_string()) Invalid("$.type", "expected a string");
  const auto name = type.get<std::string>();
  if (name == "linear") return ParseLinear(doc);
  if (name == "gbdt") return ParseGbdt(doc);
  throw Error(ErrorCode::kUnsupportedModel,
              "$.type: unsupported model type \"" + name + "\"");
}

std::shared_ptr<const Model> ParseModelText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation,
                std::string("model document is not valid JSON: ") + e.what());
  }
  return ParseModel(doc);
}

std::shared_ptr<const Model> LoadModelFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseModelText(buffer.str());
}

json SerializeModel(const Model& model) {
  if (const auto* linear = dynamic_cast<const LinearModel*>(&model)) {
    return {{"type", "linear"},
            {"weights", linear->weights()},
            {"bias", linear->bias()}};
  }
  if (const auto* gbdt = dynamic_cast<const TreeEnsembleModel*>(&model)) {
    json trees = json::array();
    for (const Tree& tree : gbdt->trees()) {
      json nodes = json::array();
      for (const TreeNode& node : tree.nodes) {
        if (node.is_leaf()) {
          nodes.push_back({{"leaf", node.leaf}});
        } else {
          nodes.push_back({{"feature", node.feature},
                           {"threshold", node.threshold},
                           {"left", node.left},
                           {"right", node.right}});
        }
      }
      trees.push_back({{"root", tree.root}, {"nodes", std::move(nodes)}});
    }
    json doc = {{"type", "gbdt"},
                {"base_score", gbdt->base_score()},
                {"transform", gbdt->transform() == OutputTransform::kSigmoid
                                  ? "sigmoid"
                                  : "identity"},
                {"trees", std::move(trees)}};
    if (gbdt->num_features() != 0) doc["num_features"] = gbdt->num_features();
    return doc;
  }
  throw Error(ErrorCode::kUnsupportedModel,
              "cannot serialize a " + model.type_name() + " model");
}

}  // namespace shapbox
