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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include <nlohmann/json.hpp>

#include "core/error.hpp"

extern char** environ;

namespace shapbox {
namespace {

using Clock = std::chrono::steady_clock;

[[noreturn]] void Fail(const std::string& message) {
  throw Error(ErrorCode::kAdapter, "subprocess model: " + message);
}

int RemainingMs(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  return left.count() <= 0 ? 0 : static_cast<int>(left.count());
}

// Writes to a pipe without letting SIGPIPE kill the process: the signal is
// blocked on this thread and any pending instance is consumed before the old
// mask comes back.
ssize_t WriteNoSigpipe(int fd, const char* data, std::size_t size) {
  sigset_t pipe_set;
  sigset_t old_set;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &pipe_set, &old_set);
  const ssize_t n = ::write(fd, data, size);
  const int saved = errno;
  if (n < 0 && saved == EPIPE) {
    const timespec zero{0, 0};
    while (sigtimedwait(&pipe_set, nullptr, &zero) > 0) {
    }
  }
  pthread_sigmask(SIG_SETMASK, &old_set, nullptr);
  errno = saved;
  return n;
}

}  // namespace

std::string EncodePredictRequest(std::int64_t id, const Matrix& rows) {
  nlohmann::json doc;
  doc["id"] = id;
  nlohmann::json batch = nlohmann::json::array();
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    const auto row = rows.row(r);
    batch.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["rows"] = std::move(batch);
  return doc.dump() + "\n";
}

SubprocessModel::SubprocessModel(std::string command,
                                 std::chrono::milliseconds timeout,
                                 std::size_t num_features)
    : command_(std::move(command)),
      timeout_(timeout),
      num_features_(num_features) {
  if (command_.empty()) {
    throw Error(ErrorCode::kConfig, "subprocess model: empty command");
  }
  if (timeout_.count() <= 0) {
    throw Error(ErrorCode::kConfig, "subprocess model: timeout must be positive");
  }
}

SubprocessModel::~SubprocessModel() {
  std::lock_guard<std::mutex> lock(mu_);
  if (child_.pid < 0) return;
  // Closing stdin asks the child to finish; give it a moment before killing.
  ::close(child_.to_child);
  child_.to_child = -1;
  for (int i = 0; i < 50; ++i) {
    if (::waitpid(child_.pid, nullptr, WNOHANG) == child_.pid) {
      child_.pid = -1;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  Discard();
}

void SubprocessModel::Spawn() const {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) Fail("pipe: " + std::string(std::strerror(errno)));
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    Fail("pipe: " + std::string(std::strerror(errno)));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

  // Own process group, so a kill also reaches whatever the shell started.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const char* argv[] = {"sh", "-c", command_.c_str(), nullptr};
  pid_t pid = -1;
  const int rc = ::posix_spawn(&pid, "/bin/sh", &actions, &attr,
                               const_cast<char* const*>(argv), environ);
  posix_spawnattr_destroy(&attr);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    Fail("cannot start '" + command_ + "': " + std::strerror(rc));
  }
  ::fcntl(in_pipe[1], F_SETFL, ::fcntl(in_pipe[1], F_GETFL) | O_NONBLOCK);
  ::fcntl(out_pipe[0], F_SETFL, ::fcntl(out_pipe[0], F_GETFL) | O_NONBLOCK);
  child_ = Child{pid, in_pipe[1], out_pipe[0], {}};
}

void SubprocessModel::Discard() const {
  if (child_.to_child >= 0) ::close(child_.to_child);
  if (child_.from_child >= 0) ::close(child_.from_child);
  if (child_.pid > 0) {
    ::kill(-child_.pid, SIGKILL);
    ::kill(child_.pid, SIGKILL);
    ::waitpid(child_.pid, nullptr, 0);
  }
  child_ = Child{};
}

void SubprocessModel::WriteAll(const std::string& bytes,
                               Clock::time_point deadline) const {
  std::size_t written = 0;
  while (written < bytes.size()) {
    pollfd pfd{child_.to_child, POLLOUT, 0};
    const int ready = ::poll(&pfd, 1, RemainingMs(deadline));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Fail("poll: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) {
      Fail("timed out after " + std::to_string(timeout_.count()) +
           " ms writing request");
    }
    const ssize_t n = WriteNoSigpipe(child_.to_child, bytes.data() + written,
                                     bytes.size() - written);
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      if (errno == EPIPE) Fail("broken pipe: child closed its input");
      Fail("write: " + std::string(std::strerror(errno)));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string SubprocessModel::ReadLine(Clock::time_point deadline) const {
  char buffer[4096];
  while (true) {
    const auto newline = child_.pending.find('\n');
    if (newline != std::string::npos) {
      std::string line = child_.pending.substr(0, newline);
      child_.pending.erase(0, newline + 1);
      return line;
    }
    pollfd pfd{child_.from_child, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, RemainingMs(deadline));
    if (ready < 0) {
      if (errno == EINTR) continue;
      Fail("poll: " + std::string(std::strerror(errno)));
    }
    if (ready == 0) {
      Fail("timed out after " + std::to_string(timeout_.count()) +
           " ms waiting for a response");
    }
    const ssize_t n = ::read(child_.from_child, buffer, sizeof(buffer));
    if (n < 0) {
      if (errno == EAGAIN || errno == EINTR) continue;
      Fail("read: " + std::string(std::strerror(errno)));
    }
    if (n == 0) {
      Fail("broken pipe: child exited before responding");
    }
    child_.pending.append(buffer, static_cast<std::size_t>(n));
  }
}

std::vector<double> SubprocessModel::PredictBatch(const Matrix& rows) const {
  CheckModelWidth(*this, rows.cols());
  std::lock_guard<std::mutex> lock(mu_);
  try {
    if (child_.pid < 0) Spawn();
    const auto deadline = Clock::now() + timeout_;
    const std::int64_t id = next_id_++;
    WriteAll(EncodePredictRequest(id, rows), deadline);
    const std::string line = ReadLine(deadline);

    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      Fail("response is not JSON: '" + line.substr(0, 200) + "'");
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_number_integer()) {
      Fail("response lacks an integer \"id\"");
    }
    const auto got = doc["id"].get<std::int64_t>();
    if (got != id) {
      Fail("id mismatch: sent request " + std::to_string(id) +
           ", got response " + std::to_string(got));
    }
    if (!doc.contains("preds") || !doc["preds"].is_array()) {
      Fail("response " + std::to_string(id) + " lacks a \"preds\" array");
    }
    const auto& preds = doc["preds"];
    if (preds.size() != rows.rows()) {
      Fail("response " + std::to_string(id) + " has " +
           std::to_string(preds.size()) + " predictions for " +
           std::to_string(rows.rows()) + " rows");
    }
    std::vector<double> out(preds.size());
    for (std::size_t k = 0; k < preds.size(); ++k) {
      if (!preds[k].is_number()) {
        Fail("prediction " + std::to_string(k) + " of response " +
             std::to_string(id) + " is not numeric: " + preds[k].dump());
      }
      out[k] = preds[k].get<double>();
      if (!std::isfinite(out[k])) {
        Fail("prediction " + std::to_string(k) + " is not finite");
      }
    }
    return out;
  } catch (const Error&) {
    Discard();
    throw;
  }
}

}  // namespace shapbox
