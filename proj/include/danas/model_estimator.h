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

#ifndef DANAS_MODEL_ESTIMATOR_H_
#define DANAS_MODEL_ESTIMATOR_H_

#include <cstdint>
#include <string>
#include <vector>

#include "danas/dsp.h"
#include "danas/search_space.h"

namespace danas {

struct EstimatorConfig {
  int bytes_per_weight = 4;
  uint64_t serialization_overhead_bytes = 2048;
  int dense_width = 10;
  int n_classes = 2;

  std::vector<std::string> check() const;
};

struct ConvLayerSpec {
  int filters = 0;
  int kernel_size = 0;
  Activation activation = Activation::kRelu;
  dsp::FeatureShape output_shape;
};

// Conv stack (stride 1, same padding, no pooling) -> flatten -> dense(ReLU)
// -> dense(softmax) over n_classes.
struct ArchitectureSpec {
  dsp::FeatureShape input_shape;
  std::vector<ConvLayerSpec> conv_layers;
  int dense_width = 0;
  int n_classes = 0;
  uint64_t total_parameters = 0;
};

ArchitectureSpec realize(const Genome& genome, const dsp::DspConfig& dsp,
                         const EstimatorConfig& cfg);

uint64_t count_parameters(const ArchitectureSpec& spec);

uint64_t estimate_model_size_bytes(const Genome& genome, const dsp::DspConfig& dsp,
                                   const EstimatorConfig& cfg);

// Model estimate + raw input buffer + feature tensor.
uint64_t total_footprint_bytes(const Genome& genome, const dsp::DspConfig& dsp,
                               const EstimatorConfig& cfg);

}  // namespace danas

#endif  // DANAS_MODEL_ESTIMATOR_H_
