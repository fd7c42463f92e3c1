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

#ifndef SHAPBOX_TOOLS_APP_SERVER_HPP_
#define SHAPBOX_TOOLS_APP_SERVER_HPP_

#include <atomic>
#include <memory>
#include <string>

#include "app/engine.hpp"

namespace httplib {
class Server;
}

namespace shapbox::app {

enum class LogLevel { kOff, kInfo, kDebug };

// SHAPBOX_LOG: "off", "info" (default) or "debug".
LogLevel LogLevelFromEnv();

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string cors_allow_origin = "*";
  LogLevel log_level = LogLevel::kInfo;
};

//   GET  /api/metadata
//   POST /api/predict  {"instance":[...]}
//   POST /api/explain  {"instance":[...], "samples"?, "seed"?}
class Server {
 public:
  Server(std::shared_ptr<const Engine> engine, ServerOptions options);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Returns the bound port, or -1 if the address is unavailable.
  int Bind();
  // Serves until Stop(); in-flight requests finish first.
  void Run();
  void Stop();

 private:
  void Log(const std::string& line) const;

  std::shared_ptr<const Engine> engine_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> http_;
  std::atomic<int> run_state_{0};  // 0 idle, 1 running, 2 finished
  std::atomic<bool> stop_requested_{false};
};

// Maps an error to its HTTP status and {"error": {...}} body.
int HttpStatusFor(const AppError& error);
nlohmann::json ErrorBody(const std::string& code, const std::string& message,
                         const std::string& field = {});

}  // namespace shapbox::app

#endif  // SHAPBOX_TOOLS_APP_SERVER_HPP_
