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

#include "danas/protocol.h"

namespace danas::protocol {

namespace {

json parse_object(std::string_view line) {
  json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) throw ProtocolError("not a JSON object");
  return j;
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + name + "'");
  return *it;
}

int int_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) throw ProtocolError(std::string("field '") + name + "' is not an integer");
  return v.get<int>();
}

double unit_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number()) throw ProtocolError(std::string("field '") + name + "' is not a number");
  const double x = v.get<double>();
  if (!(x >= 0.0 && x <= 1.0)) throw ProtocolError(std::string("field '") + name + "' outside [0, 1]");
  return x;
}

}  // namespace

json genome_to_json(const Genome& genome) {
  json layers = json::array();
  for (const auto& layer : genome.layers) {
    layers.push_back({{"filters", layer.filters},
                      {"kernel_size", layer.kernel_size},
                      {"activation", activation_name(layer.activation)}});
  }
  return {{"sample_rate_hz", genome.data.sample_rate_hz},
          {"preprocessing", preprocessing_code(genome.data.preprocessing)},
          {"layers", std::move(layers)}};
}

Genome genome_from_json(const json& j) {
  if (!j.is_object()) throw ProtocolError("genome is not an object");
  Genome genome;
  genome.data.sample_rate_hz = int_field(j, "sample_rate_hz");
  const auto& pt = field(j, "preprocessing");
  const auto parsed_pt = pt.is_string() ? parse_preprocessing(pt.get<std::string>()) : std::nullopt;
  if (!parsed_pt) throw ProtocolError("field 'preprocessing' has an unknown value");
  genome.data.preprocessing = *parsed_pt;
  const auto& layers = field(j, "layers");
  if (!layers.is_array()) throw ProtocolError("field 'layers' is not an array");
  for (const auto& l : layers) {
    if (!l.is_object()) throw ProtocolError("layer is not an object");
    LayerGene layer;
    layer.filters = int_field(l, "filters");
    layer.kernel_size = int_field(l, "kernel_size");
    const auto& af = field(l, "activation");
    const std::string name = af.is_string() ? af.get<std::string>() : "";
    if (name != "RELU" && name != "SIGMOID") throw ProtocolError("field 'activation' has an unknown value");
    layer.activation = *parse_activation(name);
    genome.layers.push_back(layer);
  }
  return genome;
}

json dsp_to_json(const dsp::DspConfig& cfg) {
  return {{"window_s", cfg.window_s},     {"frame_size", cfg.frame_size},
          {"hop_length", cfg.hop_length}, {"n_mels", cfg.n_mels},
          {"n_mfcc", cfg.n_mfcc},         {"sample_bits", cfg.sample_bits},
          {"source_rate_hz", cfg.source_rate_hz}};
}

json train_to_json(const TrainSettings& train) {
  return {{"epochs", train.epochs},
          {"batch_size", train.batch_size},
          {"dataset_dir", train.dataset_dir},
          {"seed", train.seed}};
}

std::string encode_hello(int version) {
  return json{{"type", "hello"}, {"protocol", version}}.dump();
}

std::string encode_evaluate(const EvaluationRequest& request) {
  return json{{"type", "evaluate"},
              {"id", request.id},
              {"genome", genome_to_json(request.genome)},
              {"dsp", dsp_to_json(request.dsp)},
              {"train", train_to_json(request.train)}}
      .dump();
}

std::string encode_shutdown() { return json{{"type", "shutdown"}}.dump(); }

int decode_hello(std::string_view line) {
  const json j = parse_object(line);
  const auto& type = field(j, "type");
  if (type != "hello") throw ProtocolError("expected hello message");
  return int_field(j, "protocol");
}

WorkerReply decode_reply(std::string_view line) {
  const json j = parse_object(line);
  const auto& type = field(j, "type");
  const auto& id = field(j, "id");
  if (!id.is_number_unsigned() && !(id.is_number_integer() && id.get<int64_t>() >= 0)) {
    throw ProtocolError("field 'id' is not a non-negative integer");
  }
  WorkerReply reply;
  reply.id = id.get<uint64_t>();
  if (type == "error") {
    reply.kind = WorkerReply::Kind::kError;
    const auto it = j.find("message");
    reply.message = (it != j.end() && it->is_string()) ? it->get<std::string>() : "unspecified worker error";
    return reply;
  }
  if (type != "result") throw ProtocolError("unexpected message type");
  reply.kind = WorkerReply::Kind::kResult;
  reply.metrics.feasible = true;
  reply.metrics.accuracy = unit_field(j, "accuracy");
  reply.metrics.precision = unit_field(j, "precision");
  reply.metrics.recall = unit_field(j, "recall");
  const auto& size = field(j, "model_size_bytes");
  if (!size.is_number_integer() || size.get<int64_t>() <= 0) {
    throw ProtocolError("field 'model_size_bytes' is not a positive integer");
  }
  reply.metrics.model_size_bytes = size.get<uint64_t>();
  return reply;
}

}  // namespace danas::protocol
