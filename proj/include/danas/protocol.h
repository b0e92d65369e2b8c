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

#ifndef DANAS_PROTOCOL_H_
#define DANAS_PROTOCOL_H_

// JSON codecs shared by the worker wire protocol, the evaluation log and
// the run configuration. One JSON object per line on the wire.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "danas/dsp.h"
#include "danas/evaluation.h"
#include "danas/search_space.h"
#include "json.hpp"

namespace danas::protocol {

using nlohmann::json;

inline constexpr int kVersion = 1;

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json genome_to_json(const Genome& genome);
// Throws ProtocolError naming the offending field.
Genome genome_from_json(const json& j);

json dsp_to_json(const dsp::DspConfig& cfg);
json train_to_json(const TrainSettings& train);

std::string encode_hello(int version = kVersion);
std::string encode_evaluate(const EvaluationRequest& request);
std::string encode_shutdown();

// Returns the announced protocol version.
int decode_hello(std::string_view line);

struct WorkerReply {
  enum class Kind { kResult, kError };
  Kind kind = Kind::kResult;
  uint64_t id = 0;
  MetricsRecord metrics;  // feasible for kResult
  std::string message;    // kError
};

// Parses a result or error line. Throws ProtocolError on anything else,
// including metrics outside [0, 1] or a non-positive model size.
WorkerReply decode_reply(std::string_view line);

}  // namespace danas::protocol

#endif  // DANAS_PROTOCOL_H_
