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

#ifndef DANAS_RUN_CONFIG_H_
#define DANAS_RUN_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include "danas/config_error.h"
#include "danas/dsp.h"
#include "danas/evaluation.h"
#include "danas/genetic_search.h"
#include "danas/model_estimator.h"
#include "danas/objectives.h"
#include "danas/search_space.h"
#include "json.hpp"

namespace danas {

enum class EvaluatorKind { kSynthetic, kExternal };

struct EvaluatorSettings {
  EvaluatorKind kind = EvaluatorKind::kSynthetic;
  std::string worker_command;  // required for kExternal
  double timeout_s = 600.0;
  int pool_size = 1;
};

// Everything a search run needs. Defaults reproduce the experiment
// configuration (population 10, budget 300, 2048/512 STFT, 80 mels, ...).
struct RunConfig {
  GaConfig ga;
  SearchSpace space;
  dsp::DspConfig dsp;
  ObjectiveConfig objective;
  EstimatorConfig estimator;
  TrainSettings train;
  EvaluatorSettings evaluator;
  std::optional<DataGenome> fixed_data;

  // The search space with fixed_data applied.
  SearchSpace effective_space() const;
  // Throws ConfigError naming the first offending field.
  void validate() const;
};

// Missing keys take their defaults; unknown keys and wrong types are
// rejected with ConfigError. Value ranges are left to RunConfig::validate()
// so command-line overrides can be applied first.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
// All defaults materialized.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace danas

#endif  // DANAS_RUN_CONFIG_H_
