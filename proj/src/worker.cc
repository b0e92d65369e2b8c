// Copyright 2026 The DANAS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "danas/worker.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "danas/protocol.h"

namespace danas {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

}  // namespace

WorkerProcess::WorkerProcess(std::string command, std::chrono::milliseconds handshake_timeout)
    : command_(std::move(command)), handshake_timeout_(handshake_timeout) {
  ignore_sigpipe();
  spawn();
  handshake();
}

WorkerProcess::~WorkerProcess() { shutdown(); }

void WorkerProcess::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw WorkerError(WorkerError::Kind::kSpawn, std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw WorkerError(WorkerError::Kind::kSpawn, std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    throw WorkerError(WorkerError::Kind::kSpawn, std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    // Own process group, so a kill also reaches anything the shell forked.
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void WorkerProcess::handshake() {
  std::string line;
  const auto status = read_line(line, handshake_timeout_);
  if (status != ReadStatus::kLine) {
    kill_now();
    if (status == ReadStatus::kClosed) {
      throw WorkerError(WorkerError::Kind::kSpawn,
                        "worker '" + command_ + "' exited before the handshake");
    }
    throw WorkerError(WorkerError::Kind::kHandshake, "no hello from worker '" + command_ + "'");
  }
  int version = 0;
  try {
    version = protocol::decode_hello(line);
  } catch (const protocol::ProtocolError& e) {
    kill_now();
    throw WorkerError(WorkerError::Kind::kHandshake, std::string("bad hello: ") + e.what());
  }
  if (version != protocol::kVersion) {
    kill_now();
    throw WorkerError(WorkerError::Kind::kVersionMismatch,
                      "worker speaks protocol " + std::to_string(version) + ", expected " +
                          std::to_string(protocol::kVersion));
  }
}

bool WorkerProcess::send_line(std::string_view line) {
  if (to_child_ < 0) return false;
  std::string payload(line);
  payload += '\n';
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t n = ::write(to_child_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    written += static_cast<std::size_t>(n);
  }
  return true;
}

WorkerProcess::ReadStatus WorkerProcess::read_line(std::string& line,
                                                   std::chrono::milliseconds timeout) {
  const auto deadline = Clock::now() + timeout;
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return ReadStatus::kLine;
    }
    if (from_child_ < 0) return ReadStatus::kClosed;
    const auto left =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) return ReadStatus::kTimeout;
    pollfd pfd{from_child_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1 << 30)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      return ReadStatus::kClosed;
    }
    if (ready == 0) return ReadStatus::kTimeout;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return ReadStatus::kClosed;
    }
    if (n == 0) return ReadStatus::kClosed;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void WorkerProcess::kill_now() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    ::kill(-pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }
  pid_ = -1;
}

void WorkerProcess::shutdown() {
  if (pid_ <= 0) return;
  send_line(protocol::encode_shutdown());
  close_fd(to_child_);
  const auto deadline = Clock::now() + std::chrono::seconds(2);
  while (Clock::now() < deadline) {
    if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
      pid_ = -1;
      close_fd(from_child_);
      return;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  kill_now();
}

void WorkerProcess::restart() {
  kill_now();
  spawn();
  handshake();
}

ExternalEvaluator::ExternalEvaluator(ExternalEvaluatorOptions options) : options_(std::move(options)) {
  const int n = std::max(1, options_.pool_size);
  slots_.resize(static_cast<std::size_t>(n));
  for (auto& slot : slots_) {
    slot.worker = std::make_unique<WorkerProcess>(options_.command, options_.handshake_timeout);
  }
}

ExternalEvaluator::~ExternalEvaluator() = default;

std::size_t ExternalEvaluator::restarts() const {
  std::lock_guard lock(mutex_);
  return restarts_;
}

MetricsRecord ExternalEvaluator::evaluate(const EvaluationRequest& request) {
  Slot* slot = nullptr;
  {
    std::unique_lock lock(mutex_);
    available_.wait(lock, [&] {
      for (auto& s : slots_) {
        if (!s.busy) return true;
      }
      return false;
    });
    for (auto& s : slots_) {
      if (!s.busy) {
        slot = &s;
        break;
      }
    }
    slot->busy = true;
  }

  MetricsRecord result;
  bool restart = false;
  if (!slot->worker) {
    try {
      slot->worker = std::make_unique<WorkerProcess>(options_.command, options_.handshake_timeout);
    } catch (const WorkerError& e) {
      result = MetricsRecord::infeasible(std::string("worker unavailable: ") + e.what());
    }
  }
  if (slot->worker) result = exchange(*slot->worker, request, restart);

  if (restart) {
    try {
      slot->worker->restart();
    } catch (const WorkerError&) {
      // Retried on the next request that lands on this slot.
      slot->worker.reset();
    }
  }
  {
    std::lock_guard lock(mutex_);
    if (restart) ++restarts_;
    slot->busy = false;
  }
  available_.notify_one();
  return result;
}

MetricsRecord ExternalEvaluator::exchange(WorkerProcess& worker, const EvaluationRequest& request,
                                          bool& restart) {
  if (!worker.send_line(protocol::encode_evaluate(request))) {
    restart = true;
    return MetricsRecord::infeasible("worker crash: stdin closed");
  }
  std::string line;
  switch (worker.read_line(line, options_.timeout)) {
    case WorkerProcess::ReadStatus::kTimeout:
      restart = true;
      return MetricsRecord::infeasible("timeout");
    case WorkerProcess::ReadStatus::kClosed:
      restart = true;
      return MetricsRecord::infeasible("worker crash: exited mid-request");
    case WorkerProcess::ReadStatus::kLine:
      break;
  }
  protocol::WorkerReply reply;
  try {
    reply = protocol::decode_reply(line);
  } catch (const protocol::ProtocolError& e) {
    restart = true;
    return MetricsRecord::infeasible(std::string("protocol violation: ") + e.what());
  }
  if (reply.id != request.id) {
    restart = true;
    return MetricsRecord::infeasible("protocol violation: response id " + std::to_string(reply.id) +
                                     " does not match request id " + std::to_string(request.id));
  }
  if (reply.kind == protocol::WorkerReply::Kind::kError) {
    return MetricsRecord::infeasible("worker error: " + reply.message);
  }
  return reply.metrics;
}

}  // namespace danas
