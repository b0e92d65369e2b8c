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

#include "danas/model_estimator.h"

namespace danas {

std::vector<std::string> EstimatorConfig::check() const {
  std::vector<std::string> problems;
  if (bytes_per_weight != 1 && bytes_per_weight != 2 && bytes_per_weight != 4 &&
      bytes_per_weight != 8) {
    problems.push_back("bytes_per_weight: must be one of 1, 2, 4, 8");
  }
  if (dense_width < 1) problems.push_back("dense_width: must be >= 1");
  if (n_classes < 2) problems.push_back("n_classes: must be >= 2");
  return problems;
}

ArchitectureSpec realize(const Genome& genome, const dsp::DspConfig& dsp,
                         const EstimatorConfig& cfg) {
  ArchitectureSpec spec;
  spec.input_shape = dsp::feature_shape(genome.data, dsp);
  spec.dense_width = cfg.dense_width;
  spec.n_classes = cfg.n_classes;
  for (const auto& layer : genome.layers) {
    ConvLayerSpec conv;
    conv.filters = layer.filters;
    conv.kernel_size = layer.kernel_size;
    conv.activation = layer.activation;
    conv.output_shape = {spec.input_shape.rows, spec.input_shape.cols, layer.filters};
    spec.conv_layers.push_back(conv);
  }
  spec.total_parameters = count_parameters(spec);
  return spec;
}

uint64_t count_parameters(const ArchitectureSpec& spec) {
  uint64_t total = 0;
  uint64_t channels = static_cast<uint64_t>(spec.input_shape.channels);
  for (const auto& conv : spec.conv_layers) {
    const auto k = static_cast<uint64_t>(conv.kernel_size);
    total += (k * k * channels + 1) * static_cast<uint64_t>(conv.filters);
    channels = static_cast<uint64_t>(conv.filters);
  }
  const uint64_t flatten = static_cast<uint64_t>(spec.input_shape.rows) *
                           static_cast<uint64_t>(spec.input_shape.cols) * channels;
  const auto width = static_cast<uint64_t>(spec.dense_width);
  total += (flatten + 1) * width;
  total += (width + 1) * static_cast<uint64_t>(spec.n_classes);
  return total;
}

uint64_t estimate_model_size_bytes(const Genome& genome, const dsp::DspConfig& dsp,
                                   const EstimatorConfig& cfg) {
  return realize(genome, dsp, cfg).total_parameters * static_cast<uint64_t>(cfg.bytes_per_weight) +
         cfg.serialization_overhead_bytes;
}

uint64_t total_footprint_bytes(const Genome& genome, const dsp::DspConfig& dsp,
                               const EstimatorConfig& cfg) {
  const auto shape = dsp::feature_shape(genome.data, dsp);
  const uint64_t features = static_cast<uint64_t>(shape.rows) * static_cast<uint64_t>(shape.cols) *
                            static_cast<uint64_t>(cfg.bytes_per_weight);
  return estimate_model_size_bytes(genome, dsp, cfg) +
         dsp::buffer_size_bytes(dsp.sample_bits, genome.data.sample_rate_hz, dsp.window_s) +
         features;
}

}  // namespace danas
