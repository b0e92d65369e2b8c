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

#include "danas/evaluation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace danas {

namespace oracle {

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

double noise(std::string_view key, uint64_t seed, int salt) {
  std::string material(key);
  material += ':';
  material += std::to_string(seed);
  material += ':';
  material += std::to_string(salt);
  const auto bucket = static_cast<double>(fnv1a64(material) % 4001);
  return (bucket / 4000.0 - 0.5) * 0.04;
}

double base_accuracy(const DataGenome& data, uint64_t parameters) {
  const double g = std::clamp(std::log2(data.sample_rate_hz / 375.0) / 7.0, 0.0, 1.0);
  const double c = std::min(1.0, static_cast<double>(parameters) / 20000.0);
  double pt = 1.0;
  switch (data.preprocessing) {
    case Preprocessing::kMfcc:
      pt = 1.00;
      break;
    case Preprocessing::kMelSpectrogram:
      pt = 0.97;
      break;
    case Preprocessing::kSpectrogram:
      pt = 0.94;
      break;
  }
  const double a = 0.6 + 0.4 * (1.0 - std::exp(-4.0 * g)) / (1.0 - std::exp(-4.0));
  const double cap = 0.7 + 0.3 * (1.0 - std::exp(-5.0 * c)) / (1.0 - std::exp(-5.0));
  return pt * a * cap;
}

MetricsRecord evaluate(const Genome& genome, const dsp::DspConfig& dsp,
                       const EstimatorConfig& estimator, uint64_t seed) {
  const auto spec = realize(genome, dsp, estimator);
  const std::string key = canonical_encode(genome);
  const double base = base_accuracy(genome.data, spec.total_parameters);

  MetricsRecord m;
  m.feasible = true;
  m.accuracy = std::clamp(base + noise(key, seed, 1), 0.0, 1.0);
  m.precision = std::clamp(m.accuracy - 0.03 + noise(key, seed, 2), 0.0, 1.0);
  m.recall = std::clamp(m.accuracy - 0.01 + noise(key, seed, 3), 0.0, 1.0);
  m.model_size_bytes = spec.total_parameters * static_cast<uint64_t>(estimator.bytes_per_weight) +
                       estimator.serialization_overhead_bytes;
  return m;
}

}  // namespace oracle

std::optional<MetricsRecord> EvaluationCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(key);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

bool EvaluationCache::contains(const std::string& key) const {
  std::shared_lock lock(mutex_);
  return records_.count(key) != 0;
}

bool EvaluationCache::insert(const std::string& key, const MetricsRecord& record) {
  std::unique_lock lock(mutex_);
  return records_.emplace(key, record).second;
}

std::size_t EvaluationCache::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

BatchOutcome evaluate_batch(std::span<const Genome> genomes, const dsp::DspConfig& dsp,
                            const TrainSettings& train, Evaluator& evaluator,
                            EvaluationCache& cache, int workers, uint64_t& next_request_id) {
  BatchOutcome outcome;
  outcome.items.resize(genomes.size());

  std::vector<std::string> keys;
  keys.reserve(genomes.size());
  for (const auto& g : genomes) keys.push_back(canonical_encode(g));

  // First occurrence of each uncached key gets a request.
  std::vector<std::size_t> pending;
  std::unordered_set<std::string> scheduled;
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    if (cache.contains(keys[i]) || !scheduled.insert(keys[i]).second) continue;
    pending.push_back(i);
    outcome.items[i].fresh = true;
    outcome.items[i].request_id = next_request_id++;
  }

  auto run_one = [&](std::size_t i) {
    EvaluationRequest request{outcome.items[i].request_id, genomes[i], dsp, train};
    try {
      outcome.items[i].metrics = evaluator.evaluate(request);
    } catch (const std::exception& e) {
      outcome.items[i].metrics = MetricsRecord::infeasible(std::string("evaluator failure: ") + e.what());
    }
  };

  const auto threads = static_cast<std::size_t>(std::max(1, workers));
  if (threads == 1 || pending.size() <= 1) {
    for (std::size_t i : pending) run_one(i);
  } else {
    std::atomic<std::size_t> cursor{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(threads, pending.size()); ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = cursor++; j < pending.size(); j = cursor++) run_one(pending[j]);
      });
    }
  }
  outcome.invocations = pending.size();

  for (std::size_t i : pending) cache.insert(keys[i], outcome.items[i].metrics);
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    if (outcome.items[i].fresh) continue;
    outcome.items[i].metrics = *cache.lookup(keys[i]);
  }
  return outcome;
}

}  // namespace danas
