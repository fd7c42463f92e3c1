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

#ifndef SHAPBOX_MODELS_SUBPROCESS_MODEL_HPP_
#define SHAPBOX_MODELS_SUBPROCESS_MODEL_HPP_

#include <sys/types.h>

#include <chrono>
#include <cstdint>
#include <mutex>
#include <string>

#include "core/model.hpp"

namespace shapbox {

// Model served by a child process over newline-delimited JSON:
//   request  {"id":<int>,"rows":[[...],...]}\n   (to the child's stdin)
//   response {"id":<int>,"preds":[...]}\n        (from the child's stdout)
//
// The child is started lazily with /bin/sh -c <command> and reused across
// calls. Calls are serialized; one batch is in flight at a time. Any
// transport or protocol failure raises kAdapter and discards the child, so
// the next call starts a fresh one.
class SubprocessModel final : public Model {
 public:
  SubprocessModel(std::string command, std::chrono::milliseconds timeout,
                  std::size_t num_features = 0);
  ~SubprocessModel() override;

  SubprocessModel(const SubprocessModel&) = delete;
  SubprocessModel& operator=(const SubprocessModel&) = delete;

  std::size_t num_features() const override { return num_features_; }
  std::string type_name() const override { return "subprocess"; }
  std::vector<double> PredictBatch(const Matrix& rows) const override;

  const std::string& command() const { return command_; }

 private:
  struct Child {
    pid_t pid = -1;
    int to_child = -1;
    int from_child = -1;
    std::string pending;  // bytes read past the last newline
  };

  void Spawn() const;
  void Discard() const;
  void WriteAll(const std::string& bytes,
                std::chrono::steady_clock::time_point deadline) const;
  std::string ReadLine(std::chrono::steady_clock::time_point deadline) const;

  std::string command_;
  std::chrono::milliseconds timeout_;
  std::size_t num_features_;

  mutable std::mutex mu_;
  mutable Child child_;
  mutable std::int64_t next_id_ = 1;
};

// Serializes one request line (including the trailing newline).
std::string EncodePredictRequest(std::int64_t id, const Matrix& rows);

}  // namespace shapbox

#endif  // SHAPBOX_MODELS_SUBPROCESS_MODEL_HPP_
