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

#include "models/subprocess_model.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "gtest/gtest.h"
#include "core/error.hpp"
#include "core/explainer.hpp"
#include "models/linear_model.hpp"

namespace shapbox {
namespace {

using std::chrono::milliseconds;

std::string Fake(const std::string& args) {
  return std::string(SHAPBOX_FAKE_MODEL) + " " + args;
}

std::string AdapterError(const SubprocessModel& model, const Matrix& rows) {
  try {
    model.PredictBatch(rows);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAdapter) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "no adapter error";
  return {};
}

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(SubprocessModel, EncodesRequestLine) {
  EXPECT_EQ(EncodePredictRequest(1, Matrix::FromRows({{3, 4}})),
            "{\"id\":1,\"rows\":[[3.0,4.0]]}\n");
}

TEST(SubprocessModel, LinearEcho) {
  const SubprocessModel model(Fake("linear 2 -1 0.5"), milliseconds(5000));
  EXPECT_EQ(model.PredictBatch(Matrix::FromRows({{3, 4}})), std::vector<double>{2.5});
  EXPECT_EQ(model.PredictBatch(Matrix::FromRows({{1, 2}, {0, 0}})),
            (std::vector<double>{0.5, 0.5}));
}

TEST(SubprocessModel, GoldenTranscript) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("shapbox_golden_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto responses = dir / "responses.jsonl";
  const auto record = dir / "record.jsonl";
  std::filesystem::remove(record);
  {
    std::ofstream out(responses, std::ios::binary);
    out << "{\"id\":1,\"preds\":[2.5]}\n"
        << "{\"id\":2,\"preds\":[0.5,2.75]}\n";
  }
  {
    const SubprocessModel model(
        Fake("replay " + responses.string() + " " + record.string()),
        milliseconds(5000));
    EXPECT_EQ(model.PredictBatch(Matrix::FromRows({{3, 4}})),
              std::vector<double>{2.5});
    EXPECT_EQ(model.PredictBatch(Matrix::FromRows({{1, 2}, {0.5, -1.25}})),
              (std::vector<double>{0.5, 2.75}));
  }
  EXPECT_EQ(ReadAll(record),
            "{\"id\":1,\"rows\":[[3.0,4.0]]}\n"
            "{\"id\":2,\"rows\":[[1.0,2.0],[0.5,-1.25]]}\n");
  std::filesystem::remove_all(dir);
}

TEST(SubprocessModel, IdMismatch) {
  const SubprocessModel model(Fake("wrong-id"), milliseconds(5000));
  const auto msg = AdapterError(model, Matrix::FromRows({{3, 4}}));
  EXPECT_NE(msg.find("id mismatch"), std::string::npos) << msg;
}

TEST(SubprocessModel, ChildExitMidBatch) {
  const SubprocessModel model(Fake("exit-after 0"), milliseconds(5000));
  const auto msg = AdapterError(model, Matrix::FromRows({{3, 4}}));
  EXPECT_NE(msg.find("broken pipe"), std::string::npos) << msg;
}

TEST(SubprocessModel, Timeout) {
  const SubprocessModel model(Fake("sleep 2000"), milliseconds(150));
  const auto start = std::chrono::steady_clock::now();
  const auto msg = AdapterError(model, Matrix::FromRows({{3, 4}}));
  const auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_NE(msg.find("timed out"), std::string::npos) << msg;
  EXPECT_LT(elapsed, milliseconds(1500));
}

TEST(SubprocessModel, NonNumericPrediction) {
  const SubprocessModel model(Fake("garbage"), milliseconds(5000));
  const auto msg = AdapterError(model, Matrix::FromRows({{3, 4}}));
  EXPECT_NE(msg.find("not numeric"), std::string::npos) << msg;
}

TEST(SubprocessModel, MissingExecutable) {
  const SubprocessModel model("/nonexistent/model-binary 2>/dev/null",
                              milliseconds(5000));
  AdapterError(model, Matrix::FromRows({{3, 4}}));
}

TEST(SubprocessModel, ReusesChildAndRestartsAfterFailure) {
  // The child serves exactly one request per process: a second call on the
  // same child fails, and the call after that gets a fresh child.
  const SubprocessModel model(Fake("exit-after 1"), milliseconds(5000));
  const auto rows = Matrix::FromRows({{3, 4}});
  EXPECT_NO_THROW(model.PredictBatch(rows));
  AdapterError(model, rows);
  EXPECT_NO_THROW(model.PredictBatch(rows));
}

TEST(SubprocessModel, WidthCheck) {
  const SubprocessModel model(Fake("linear 2 -1 0.5"), milliseconds(5000), 2);
  try {
    model.PredictBatch(Matrix::FromRows({{1, 2, 3}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShape);
  }
}

TEST(SubprocessModel, ConcurrentCallersAreSerialized) {
  const SubprocessModel model(Fake("linear 1 1 0"), milliseconds(10000));
  std::vector<std::thread> threads;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 20; ++i) {
        const auto p = model.PredictBatch(Matrix::FromRows({{double(t), double(i)}}));
        if (p.size() == 1 && p[0] == t + i) ++ok[t];
      }
    });
  }
  for (auto& th : threads) th.join();
  for (int t = 0; t < 8; ++t) EXPECT_EQ(ok[t], 20);
}

TEST(SubprocessModel, ExplainMatchesInProcessModel) {
  const SubprocessModel remote(Fake("linear 2 -1 0.25 3 0.5"), milliseconds(10000));
  const LinearModel local({2, -1, 0.25, 3}, 0.5);
  const std::vector<double> x{3, 4, -1, 2};
  const auto bg = Matrix::FromRows({{1, 2, 0, 0}, {0, 1, 1, 1}});
  ExplainerConfig config;
  config.seed = 5;
  const auto a = Explain(remote, x, bg, config);
  const auto b = Explain(local, x, bg, config);
  EXPECT_EQ(a.base_value, b.base_value);
  for (std::size_t j = 0; j < x.size(); ++j) EXPECT_NEAR(a.phi[j], b.phi[j], 1e-12);
}

}  // namespace
}  // namespace shapbox
