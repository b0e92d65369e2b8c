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

#ifndef DANAS_WORKER_H_
#define DANAS_WORKER_H_

#include <sys/types.h>

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "danas/evaluation.h"

namespace danas {

class WorkerError : public std::runtime_error {
 public:
  enum class Kind { kSpawn, kHandshake, kVersionMismatch };
  WorkerError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A trainer process launched through `/bin/sh -c`, speaking the line
// protocol over its stdin/stdout. stderr is inherited.
class WorkerProcess {
 public:
  enum class ReadStatus { kLine, kTimeout, kClosed };

  // Spawns and completes the hello handshake. Throws WorkerError.
  WorkerProcess(std::string command, std::chrono::milliseconds handshake_timeout);
  ~WorkerProcess();

  WorkerProcess(const WorkerProcess&) = delete;
  WorkerProcess& operator=(const WorkerProcess&) = delete;

  // False if the worker's stdin is closed.
  bool send_line(std::string_view line);
  ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout);

  // Kills the current process (if any) and spawns a fresh one.
  void restart();
  bool alive() const { return pid_ > 0; }
  pid_t pid() const { return pid_; }

 private:
  void spawn();
  void handshake();
  void kill_now();
  void shutdown();

  std::string command_;
  std::chrono::milliseconds handshake_timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

struct ExternalEvaluatorOptions {
  std::string command;
  std::chrono::milliseconds timeout{std::chrono::seconds(600)};
  std::chrono::milliseconds handshake_timeout{std::chrono::seconds(60)};
  int pool_size = 1;
};

// Evaluator backed by a pool of worker processes. Each request holds one
// worker exclusively. Timeouts, crashes and malformed replies produce an
// infeasible record and a worker restart.
class ExternalEvaluator : public Evaluator {
 public:
  // Throws WorkerError if any worker fails to start.
  explicit ExternalEvaluator(ExternalEvaluatorOptions options);
  ~ExternalEvaluator() override;

  MetricsRecord evaluate(const EvaluationRequest& request) override;
  std::string source() const override { return "external"; }

  std::size_t restarts() const;

 private:
  struct Slot {
    std::unique_ptr<WorkerProcess> worker;
    bool busy = false;
  };

  MetricsRecord exchange(WorkerProcess& worker, const EvaluationRequest& request, bool& restart);

  ExternalEvaluatorOptions options_;
  mutable std::mutex mutex_;
  std::condition_variable available_;
  std::vector<Slot> slots_;
  std::size_t restarts_ = 0;
};

}  // namespace danas

#endif  // DANAS_WORKER_H_
