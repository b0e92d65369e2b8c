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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "danas/genetic_search.h"
#include "danas/protocol.h"
#include "danas/worker.h"
#include "test_support.h"

namespace danas {
namespace {

using namespace danas::testing;
using namespace std::chrono_literals;
using nlohmann::json;
namespace fs = std::filesystem;

std::string fake(const std::string& args) { return std::string(FAKE_WORKER_PATH) + " " + args; }

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("danas_worker_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

ExternalEvaluatorOptions options(const std::string& args) {
  ExternalEvaluatorOptions o;
  o.command = fake(args);
  o.timeout = 5s;
  o.handshake_timeout = 5s;
  return o;
}

EvaluationRequest request(uint64_t id, Genome g = make_genome(750, MFCC, {{2, 5, S}, {2, 5, R}, {2, 5, R}})) {
  EvaluationRequest r;
  r.id = id;
  r.genome = std::move(g);
  r.train.seed = 1;
  r.train.dataset_dir = "/data/audio";
  return r;
}

WorkerError::Kind spawn_error(const std::string& command, std::chrono::milliseconds timeout = 5s) {
  try {
    WorkerProcess w(command, timeout);
  } catch (const WorkerError& e) {
    return e.kind();
  }
  FAIL("worker started");
  return WorkerError::Kind::kSpawn;
}

TEST_CASE("protocol: evaluate message layout") {
  const auto line = protocol::encode_evaluate(request(42));
  CHECK(line.find('\n') == std::string::npos);
  const auto j = json::parse(line);
  CHECK(j["type"] == "evaluate");
  CHECK(j["id"] == 42);
  CHECK(j["genome"]["sample_rate_hz"] == 750);
  CHECK(j["genome"]["preprocessing"] == "MFCC");
  REQUIRE(j["genome"]["layers"].size() == 3);
  CHECK(j["genome"]["layers"][0] == json({{"filters", 2}, {"kernel_size", 5}, {"activation", "SIGMOID"}}));
  CHECK(j["dsp"]["frame_size"] == 2048);
  CHECK(j["dsp"]["hop_length"] == 512);
  CHECK(j["dsp"]["window_s"] == 5.0);
  CHECK(j["train"] == json({{"epochs", 20}, {"batch_size", 32}, {"dataset_dir", "/data/audio"}, {"seed", 1}}));

  CHECK(json::parse(protocol::encode_hello()) == json({{"type", "hello"}, {"protocol", 1}}));
  CHECK(json::parse(protocol::encode_shutdown()) == json({{"type", "shutdown"}}));
}

TEST_CASE("protocol: genome json round trip") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto g = random_genome(SearchSpace{}, rng);
    CHECK(protocol::genome_from_json(json::parse(protocol::genome_to_json(g).dump())) == g);
  }
  auto j = protocol::genome_to_json(make_genome(375, SP, {{2, 3, R}}));
  j["preprocessing"] = "WAVELET";
  CHECK_THROWS_AS(protocol::genome_from_json(j), protocol::ProtocolError);
  j = protocol::genome_to_json(make_genome(375, SP, {{2, 3, R}}));
  j["layers"][0]["activation"] = "TANH";
  CHECK_THROWS_AS(protocol::genome_from_json(j), protocol::ProtocolError);
  j.erase("layers");
  CHECK_THROWS_AS(protocol::genome_from_json(j), protocol::ProtocolError);
}

TEST_CASE("protocol: reply decoding") {
  const auto ok = protocol::decode_reply(
      R"({"type":"result","id":7,"accuracy":0.9,"precision":0.8,"recall":1,"model_size_bytes":11536})");
  CHECK(ok.kind == protocol::WorkerReply::Kind::kResult);
  CHECK(ok.id == 7);
  CHECK(ok.metrics.feasible);
  CHECK(ok.metrics.accuracy == 0.9);
  CHECK(ok.metrics.recall == 1.0);
  CHECK(ok.metrics.model_size_bytes == 11536);

  const auto err = protocol::decode_reply(R"({"type":"error","id":3,"message":"no data"})");
  CHECK(err.kind == protocol::WorkerReply::Kind::kError);
  CHECK(err.id == 3);
  CHECK(err.message == "no data");

  CHECK(protocol::decode_hello(R"({"type":"hello","protocol":1})") == 1);
  CHECK_THROWS_AS(protocol::decode_hello(R"({"type":"result","protocol":1})"), protocol::ProtocolError);

  for (const char* bad : {
           "",
           "garbage",
           "[1,2]",
           R"({"type":"result"})",
           R"({"type":"result","id":-1,"accuracy":0.9,"precision":0.8,"recall":1,"model_size_bytes":1})",
           R"({"type":"result","id":1,"accuracy":1.5,"precision":0.8,"recall":1,"model_size_bytes":1})",
           R"({"type":"result","id":1,"accuracy":0.5,"precision":-0.1,"recall":1,"model_size_bytes":1})",
           R"({"type":"result","id":1,"accuracy":0.5,"precision":0.1,"recall":"1","model_size_bytes":1})",
           R"({"type":"result","id":1,"accuracy":0.5,"precision":0.1,"recall":1,"model_size_bytes":0})",
           R"({"type":"result","id":1,"accuracy":0.5,"precision":0.1,"recall":1,"model_size_bytes":2.5})",
           R"({"type":"progress","id":1})",
       }) {
    CAPTURE(bad);
    CHECK_THROWS_AS(protocol::decode_reply(bad), protocol::ProtocolError);
  }
}

TEST_CASE("worker process: handshake failures") {
  CHECK(spawn_error(fake("bad-hello")) == WorkerError::Kind::kVersionMismatch);
  CHECK(spawn_error(fake("exit-before-hello")) == WorkerError::Kind::kSpawn);
  CHECK(spawn_error("/nonexistent/trainer --serve") == WorkerError::Kind::kSpawn);
  const auto start = std::chrono::steady_clock::now();
  CHECK(spawn_error(fake("no-hello"), 300ms) == WorkerError::Kind::kHandshake);
  CHECK(std::chrono::steady_clock::now() - start < 5s);
  CHECK(spawn_error("echo not-json") == WorkerError::Kind::kHandshake);
}

TEST_CASE("worker process: exchange and clean shutdown") {
  const auto start = std::chrono::steady_clock::now();
  {
    WorkerProcess w(fake("ok"), 5s);
    CHECK(w.alive());
    REQUIRE(w.send_line(protocol::encode_evaluate(request(5))));
    std::string line;
    REQUIRE(w.read_line(line, 5s) == WorkerProcess::ReadStatus::kLine);
    CHECK(protocol::decode_reply(line).id == 5);
    CHECK(w.read_line(line, 50ms) == WorkerProcess::ReadStatus::kTimeout);
  }
  // The worker exits on shutdown rather than waiting out the kill deadline.
  CHECK(std::chrono::steady_clock::now() - start < 1500ms);
}

TEST_CASE("external evaluator: well-formed results") {
  const auto record = scratch("requests.jsonl");
  auto opts = options("ok");
  opts.command = "FAKE_WORKER_RECORD=" + record.string() + " " + opts.command;
  ExternalEvaluator eval(opts);
  CHECK(eval.source() == "external");
  const auto req = request(9);
  const auto m = eval.evaluate(req);
  CHECK(m == oracle::evaluate(req.genome, req.dsp, EstimatorConfig{}, 1));
  CHECK(eval.restarts() == 0);

  std::ifstream in(record);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(json::parse(line) == json::parse(protocol::encode_evaluate(req)));
}

TEST_CASE("external evaluator: failures become infeasible records") {
  SUBCASE("garbage output") {
    ExternalEvaluator eval(options("garbage"));
    const auto m = eval.evaluate(request(1));
    CHECK_FALSE(m.feasible);
    CHECK(m.error.rfind("protocol violation", 0) == 0);
    CHECK(eval.restarts() == 1);
  }
  SUBCASE("mismatched id") {
    ExternalEvaluator eval(options("wrong-id"));
    const auto m = eval.evaluate(request(1));
    CHECK_FALSE(m.feasible);
    CHECK(m.error.rfind("protocol violation", 0) == 0);
    CHECK(m.error.find("id") != std::string::npos);
  }
  SUBCASE("metric out of range") {
    ExternalEvaluator eval(options("out-of-range"));
    const auto m = eval.evaluate(request(1));
    CHECK_FALSE(m.feasible);
    CHECK(m.error.rfind("protocol violation", 0) == 0);
  }
  SUBCASE("error reply keeps the worker") {
    ExternalEvaluator eval(options("error-reply"));
    const auto m = eval.evaluate(request(1));
    CHECK_FALSE(m.feasible);
    CHECK(m.error == "worker error: dataset missing");
    CHECK(eval.restarts() == 0);
  }
  SUBCASE("timeout") {
    auto opts = options("slow 3000");
    opts.timeout = 200ms;
    ExternalEvaluator eval(opts);
    const auto start = std::chrono::steady_clock::now();
    const auto m = eval.evaluate(request(1));
    CHECK(std::chrono::steady_clock::now() - start < 2s);
    CHECK_FALSE(m.feasible);
    CHECK(m.error == "timeout");
    CHECK(eval.restarts() == 1);
  }
  SUBCASE("crash mid-request, then recover") {
    const auto marker = scratch("crashed.marker");
    ExternalEvaluator eval(options("crash-once " + marker.string()));
    const auto first = eval.evaluate(request(1));
    CHECK_FALSE(first.feasible);
    CHECK(first.error.rfind("worker crash", 0) == 0);
    CHECK(eval.restarts() == 1);
    const auto second = eval.evaluate(request(2));
    CHECK(second.feasible);
    CHECK(second == oracle::evaluate(request(2).genome, dsp::DspConfig{}, EstimatorConfig{}, 1));
  }
  SUBCASE("failed restart is retried on the next request") {
    const auto marker = scratch("started.marker");
    ExternalEvaluatorOptions opts;
    opts.command = "if [ -f " + marker.string() + " ]; then exit 0; fi; touch " + marker.string() +
                   "; exec " + fake("crash-always");
    opts.handshake_timeout = 5s;
    ExternalEvaluator eval(opts);
    CHECK(eval.evaluate(request(1)).error.rfind("worker crash", 0) == 0);
    const auto m = eval.evaluate(request(2));
    CHECK_FALSE(m.feasible);
    CHECK(m.error.rfind("worker unavailable", 0) == 0);
  }
  SUBCASE("spawn failure surfaces from the constructor") {
    CHECK_THROWS_AS(ExternalEvaluator(options("bad-hello")), WorkerError);
  }
}

TEST_CASE("external search matches the synthetic search") {
  GaConfig cfg;
  cfg.population_size = 6;
  cfg.eval_budget = 30;
  cfg.seed = 5;
  cfg.workers = 2;
  SearchContext ctx;
  ctx.clock = [] { return std::string("t"); };

  auto opts = options("ok");
  opts.pool_size = 2;
  ExternalEvaluator external(opts);
  SyntheticEvaluator synthetic;
  const auto a = run_search(cfg, SearchSpace{}, ctx, external);
  const auto b = run_search(cfg, SearchSpace{}, ctx, synthetic);
  REQUIRE(a.log.size() == 30);
  REQUIRE(b.log.size() == 30);
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].key == b.log[i].key);
    CHECK(a.log[i].metrics == b.log[i].metrics);
    CHECK(a.log[i].source == "external");
  }
  CHECK(external.restarts() == 0);
}

TEST_CASE("a crashing worker never aborts the search") {
  GaConfig cfg;
  cfg.population_size = 4;
  cfg.eval_budget = 8;
  SearchContext ctx;
  ExternalEvaluator eval(options("crash-always"));
  const auto r = run_search(cfg, SearchSpace{}, ctx, eval);
  CHECK(r.log.size() == 8);
  for (const auto& rec : r.log) {
    CHECK_FALSE(rec.metrics.feasible);
    CHECK(rec.fitness == 0.0);
  }
  CHECK(r.frontier.empty());
}

}  // namespace
}  // namespace danas
