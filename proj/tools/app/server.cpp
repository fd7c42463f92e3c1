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

#include "app/server.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <mutex>
#include <thread>

#include "httplib.h"

namespace shapbox::app {
namespace {

using Clock = std::chrono::steady_clock;

thread_local Clock::time_point t_request_start;

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void Reply(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
void Handle(httplib::Response& res, Fn&& fn) {
  try {
    Reply(res, 200, fn());
  } catch (const AppError& e) {
    Reply(res, HttpStatusFor(e), ErrorBody(e.code(), e.what(), e.field()));
  } catch (const nlohmann::json::exception& e) {
    Reply(res, 400, ErrorBody("invalid_argument",
                              std::string("malformed JSON body: ") + e.what()));
  } catch (const std::exception& e) {
    Reply(res, 500, ErrorBody("internal_error", e.what()));
  }
}

}  // namespace

LogLevel LogLevelFromEnv() {
  const char* env = std::getenv("SHAPBOX_LOG");
  if (env == nullptr) return LogLevel::kInfo;
  const std::string v = env;
  if (v == "debug") return LogLevel::kDebug;
  if (v == "off" || v == "none" || v == "0") return LogLevel::kOff;
  return LogLevel::kInfo;
}

int HttpStatusFor(const AppError& error) {
  if (error.status() == SHAPBOX_ERR_INVALID_ARGUMENT) return 400;
  if (error.origin() == Origin::kInput) return 422;
  if (error.status() == SHAPBOX_ERR_ADAPTER) return 502;
  return 500;
}

nlohmann::json ErrorBody(const std::string& code, const std::string& message,
                         const std::string& field) {
  nlohmann::json err = {{"code", code}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  return {{"error", err}};
}

Server::Server(std::shared_ptr<const Engine> engine, ServerOptions options)
    : engine_(std::move(engine)),
      options_(std::move(options)),
      http_(std::make_unique<httplib::Server>()) {
  http_->set_payload_max_length(1 << 20);
  // SO_REUSEADDR only; port sharing would hide a second instance.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  http_->set_default_headers(
      {{"Access-Control-Allow-Origin", options_.cors_allow_origin}});

  http_->Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  http_->Get("/api/metadata", [this](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { return engine_->Metadata(); });
  });

  http_->Post("/api/predict", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    Handle(res, [&] {
      const auto body = nlohmann::json::parse(req.body);
      if (!body.is_object() || !body.contains("instance")) {
        throw AppError(SHAPBOX_ERR_INVALID_ARGUMENT, Origin::kInput,
                       "instance is required", "instance");
      }
      const auto instance = ParseInstance(body["instance"], "instance");
      return nlohmann::json{{"prediction", engine_->Predict(instance)}};
    });
  });

  http_->Post("/api/explain", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    Handle(res, [&] {
      const auto request = ParseExplainRequest(nlohmann::json::parse(req.body));
      return engine_->ExplainJson(engine_->Explain(request));
    });
  });

  http_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      Reply(res, res.status,
            ErrorBody(res.status == 404 ? "not_found" : "http_error",
                      httplib::status_message(res.status)));
    }
  });

  if (options_.log_level != LogLevel::kOff) {
    http_->set_pre_routing_handler([](const httplib::Request&, httplib::Response&) {
      t_request_start = Clock::now();
      return httplib::Server::HandlerResponse::Unhandled;
    });
    http_->set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      const double ms =
          std::chrono::duration<double, std::milli>(Clock::now() - t_request_start)
              .count();
      char latency[32];
      std::snprintf(latency, sizeof(latency), "%.2fms", ms);
      std::string line = UtcNow() + " " + req.method + " " + req.path + " " +
                         std::to_string(res.status) + " " + latency;
      if (options_.log_level == LogLevel::kDebug) {
        line += " req=" + req.body + " res=" + res.body;
      }
      Log(line);
    });
  }
}

Server::~Server() = default;

int Server::Bind() {
  if (options_.port == 0) return http_->bind_to_any_port(options_.host);
  return http_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
}

void Server::Run() {
  run_state_ = 1;
  if (!stop_requested_) http_->listen_after_bind();
  run_state_ = 2;
}

void Server::Stop() {
  stop_requested_ = true;
  // A stop issued before the accept loop starts would otherwise be lost.
  while (run_state_ == 1 && !http_->is_running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  http_->stop();
}

void Server::Log(const std::string& line) const {
  static std::mutex mu;
  const std::lock_guard<std::mutex> lock(mu);
  std::cerr << line << '\n';
}

}  // namespace shapbox::app
