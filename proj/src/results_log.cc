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

#include "danas/results_log.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "danas/protocol.h"

namespace danas {

namespace {

using nlohmann::json;
using protocol::ProtocolError;

constexpr std::size_t kMinCsvLayers = 5;

const json& member(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + name + "'");
  return *it;
}

double number(const json& j, const char* name) {
  const auto& v = member(j, name);
  if (!v.is_number()) throw ProtocolError(std::string("field '") + name + "' is not a number");
  return v.get<double>();
}

uint64_t unsigned_number(const json& j, const char* name) {
  const auto& v = member(j, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
    throw ProtocolError(std::string("field '") + name + "' is not a non-negative integer");
  }
  return v.get<uint64_t>();
}

std::string text(const json& j, const char* name) {
  const auto& v = member(j, name);
  if (!v.is_string()) throw ProtocolError(std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

std::string fixed6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

json record_to_json(const EvaluationRecord& rec) {
  json metrics = {{"accuracy", rec.metrics.accuracy},
                  {"precision", rec.metrics.precision},
                  {"recall", rec.metrics.recall},
                  {"model_size_bytes", rec.metrics.model_size_bytes},
                  {"feasible", rec.metrics.feasible}};
  if (!rec.metrics.feasible) metrics["error"] = rec.metrics.error;
  return {{"seq", rec.seq},
          {"generation", rec.generation},
          {"key", rec.key},
          {"genome", protocol::genome_to_json(rec.genome)},
          {"metrics", std::move(metrics)},
          {"fitness", rec.fitness},
          {"source", rec.source},
          {"timestamp", rec.timestamp}};
}

EvaluationRecord record_from_json(const json& j) {
  if (!j.is_object()) throw ProtocolError("record is not an object");
  EvaluationRecord rec;
  rec.seq = unsigned_number(j, "seq");
  rec.generation = static_cast<int>(unsigned_number(j, "generation"));
  rec.key = text(j, "key");
  rec.genome = protocol::genome_from_json(member(j, "genome"));
  if (canonical_encode(rec.genome) != rec.key) throw ProtocolError("key does not match genome");
  const auto& m = member(j, "metrics");
  if (!m.is_object()) throw ProtocolError("field 'metrics' is not an object");
  rec.metrics.accuracy = number(m, "accuracy");
  rec.metrics.precision = number(m, "precision");
  rec.metrics.recall = number(m, "recall");
  rec.metrics.model_size_bytes = unsigned_number(m, "model_size_bytes");
  const auto& feasible = member(m, "feasible");
  if (!feasible.is_boolean()) throw ProtocolError("field 'feasible' is not a boolean");
  rec.metrics.feasible = feasible.get<bool>();
  if (!rec.metrics.feasible) {
    if (const auto it = m.find("error"); it != m.end() && it->is_string()) {
      rec.metrics.error = it->get<std::string>();
    }
  }
  rec.fitness = number(j, "fitness");
  rec.source = text(j, "source");
  rec.timestamp = text(j, "timestamp");
  return rec;
}

std::string encode_log_line(const EvaluationRecord& rec) { return record_to_json(rec).dump(); }

LogWriter::LogWriter(const std::filesystem::path& path) : out_(path, std::ios::trunc) {}

void LogWriter::append(const EvaluationRecord& rec) {
  out_ << encode_log_line(rec) << '\n';
  out_.flush();
}

LogReadResult read_log(std::istream& in) {
  LogReadResult result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      result.records.push_back(record_from_json(j));
    } catch (const std::exception& e) {
      result.errors.push_back("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return result;
}

std::string frontier_csv(std::span<const EvaluationRecord> frontier) {
  std::size_t layers = kMinCsvLayers;
  for (const auto& rec : frontier) layers = std::max(layers, rec.genome.layers.size());

  std::ostringstream out;
  out << "SR,PT";
  for (std::size_t i = 1; i <= layers; ++i) out << ",F" << i << ",FS" << i << ",AF" << i;
  out << ",Acc,Pre,Rec,MS\n";
  for (const auto& rec : frontier) {
    out << rec.genome.data.sample_rate_hz << ',' << preprocessing_code(rec.genome.data.preprocessing);
    for (std::size_t i = 0; i < layers; ++i) {
      if (i < rec.genome.layers.size()) {
        const auto& l = rec.genome.layers[i];
        out << ',' << l.filters << ',' << l.kernel_size << ',' << activation_code(l.activation);
      } else {
        out << ",,,";
      }
    }
    out << ',' << fixed6(rec.metrics.accuracy) << ',' << fixed6(rec.metrics.precision) << ','
        << fixed6(rec.metrics.recall) << ',' << rec.metrics.model_size_bytes << '\n';
  }
  return out.str();
}

}  // namespace danas
