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

#ifndef DANAS_OBJECTIVES_H_
#define DANAS_OBJECTIVES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "danas/search_space.h"

namespace danas {

// Predictive metrics plus model size for one evaluated genome. Infeasible
// records carry an error description instead of meaningful metrics.
struct MetricsRecord {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  uint64_t model_size_bytes = 0;
  bool feasible = false;
  std::string error;

  static MetricsRecord infeasible(std::string why) {
    MetricsRecord m;
    m.error = std::move(why);
    return m;
  }

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct ObjectiveConfig {
  double approx_model_size_range = 100000.0;  // bytes
};

// exp(-size / range), in (0, 1].
double normalize_size(double model_size_bytes, const ObjectiveConfig& cfg);

// accuracy + precision + recall + normalize_size; 0 for infeasible records.
double scalar_fitness(const MetricsRecord& m, const ObjectiveConfig& cfg);

// Weak improvement on all four objectives (higher metrics, smaller size)
// and strict on at least one.
bool dominates(const MetricsRecord& a, const MetricsRecord& b);

// One line of the evaluation log.
struct EvaluationRecord {
  uint64_t seq = 0;
  int generation = 0;
  std::string key;
  Genome genome;
  MetricsRecord metrics;
  double fitness = 0.0;
  std::string source;
  std::string timestamp;

  friend bool operator==(const EvaluationRecord&, const EvaluationRecord&) = default;
};

// Feasible, non-dominated records sorted by model size (then key). Records
// sharing a genome key collapse to the one with the best fitness; records
// with identical metrics collapse to the lexicographically smallest key.
std::vector<EvaluationRecord> pareto_frontier(std::span<const EvaluationRecord> log);

}  // namespace danas

#endif  // DANAS_OBJECTIVES_H_
