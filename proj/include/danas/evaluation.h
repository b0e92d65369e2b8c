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

#ifndef DANAS_EVALUATION_H_
#define DANAS_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "danas/dsp.h"
#include "danas/model_estimator.h"
#include "danas/objectives.h"
#include "danas/search_space.h"

namespace danas {

struct TrainSettings {
  int epochs = 20;
  int batch_size = 32;
  std::string dataset_dir;
  uint64_t seed = 0;
};

struct EvaluationRequest {
  uint64_t id = 0;
  Genome genome;
  dsp::DspConfig dsp;
  TrainSettings train;
};

// Evaluator contract. Implementations must be callable concurrently and
// report failures as infeasible records rather than throwing.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual MetricsRecord evaluate(const EvaluationRequest& request) = 0;
  // Tag written into the log ("synthetic", "external").
  virtual std::string source() const = 0;
};

// Deterministic stand-in for training. All constants are invented; the
// shape (accuracy saturating in data granularity and capacity) is what
// matters.
namespace oracle {

uint64_t fnv1a64(std::string_view bytes);

// Pseudo-random perturbation in [-0.02, 0.02] keyed on (key, seed, salt).
double noise(std::string_view key, uint64_t seed, int salt);

// Accuracy before noise: pt * A(sample rate) * C(parameter count).
double base_accuracy(const DataGenome& data, uint64_t parameters);

MetricsRecord evaluate(const Genome& genome, const dsp::DspConfig& dsp,
                       const EstimatorConfig& estimator, uint64_t seed);

}  // namespace oracle

class SyntheticEvaluator : public Evaluator {
 public:
  explicit SyntheticEvaluator(EstimatorConfig estimator = {}) : estimator_(estimator) {}

  MetricsRecord evaluate(const EvaluationRequest& request) override {
    return oracle::evaluate(request.genome, request.dsp, estimator_, request.train.seed);
  }
  std::string source() const override { return "synthetic"; }

 private:
  EstimatorConfig estimator_;
};

// Canonical key -> metrics. Insert-once; safe for concurrent use.
class EvaluationCache {
 public:
  std::optional<MetricsRecord> lookup(const std::string& key) const;
  bool contains(const std::string& key) const;
  // Returns false (and leaves the stored record) if the key is present.
  bool insert(const std::string& key, const MetricsRecord& record);
  std::size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, MetricsRecord> records_;
};

struct BatchItem {
  MetricsRecord metrics;
  bool fresh = false;  // produced by an evaluator call in this batch
  uint64_t request_id = 0;
};

struct BatchOutcome {
  std::vector<BatchItem> items;  // parallel to the input genomes
  std::size_t invocations = 0;
};

// Evaluates every genome not already cached, once per distinct key, on up
// to `workers` threads. Request ids are assigned in input order starting
// at `next_request_id`, which is advanced. Evaluator exceptions become
// infeasible records.
BatchOutcome evaluate_batch(std::span<const Genome> genomes, const dsp::DspConfig& dsp,
                            const TrainSettings& train, Evaluator& evaluator,
                            EvaluationCache& cache, int workers, uint64_t& next_request_id);

}  // namespace danas

#endif  // DANAS_EVALUATION_H_
