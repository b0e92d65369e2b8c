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

#include "danas/objectives.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace danas {

double normalize_size(double model_size_bytes, const ObjectiveConfig& cfg) {
  return std::exp(-model_size_bytes / cfg.approx_model_size_range);
}

double scalar_fitness(const MetricsRecord& m, const ObjectiveConfig& cfg) {
  if (!m.feasible) return 0.0;
  return m.accuracy + m.precision + m.recall +
         normalize_size(static_cast<double>(m.model_size_bytes), cfg);
}

bool dominates(const MetricsRecord& a, const MetricsRecord& b) {
  if (a.accuracy < b.accuracy || a.precision < b.precision || a.recall < b.recall ||
      a.model_size_bytes > b.model_size_bytes) {
    return false;
  }
  return a.accuracy > b.accuracy || a.precision > b.precision || a.recall > b.recall ||
         a.model_size_bytes < b.model_size_bytes;
}

std::vector<EvaluationRecord> pareto_frontier(std::span<const EvaluationRecord> log) {
  // Best record per genome key; earlier records win fitness ties.
  std::map<std::string, const EvaluationRecord*> best_by_key;
  for (const auto& rec : log) {
    if (!rec.metrics.feasible) continue;
    auto [it, inserted] = best_by_key.try_emplace(rec.key, &rec);
    if (!inserted && rec.fitness > it->second->fitness) it->second = &rec;
  }

  std::vector<const EvaluationRecord*> candidates;
  candidates.reserve(best_by_key.size());
  for (const auto& [key, rec] : best_by_key) candidates.push_back(rec);

  // Sweep in order of increasing size with better metrics first. A record
  // can only be dominated by one that sorts before it, and any dominated
  // predecessor is itself dominated by a kept frontier member, so checking
  // against the kept set is sufficient.
  auto order = [](const EvaluationRecord* a, const EvaluationRecord* b) {
    const auto& x = a->metrics;
    const auto& y = b->metrics;
    return std::tie(x.model_size_bytes, y.accuracy, y.precision, y.recall, a->key) <
           std::tie(y.model_size_bytes, x.accuracy, x.precision, x.recall, b->key);
  };
  std::sort(candidates.begin(), candidates.end(), order);

  std::vector<const EvaluationRecord*> kept;
  for (const auto* rec : candidates) {
    bool drop = false;
    for (const auto* member : kept) {
      const auto& m = member->metrics;
      const auto& r = rec->metrics;
      const bool same_metrics = m.accuracy == r.accuracy && m.precision == r.precision &&
                                m.recall == r.recall && m.model_size_bytes == r.model_size_bytes;
      // Equal metrics: the member already kept has the smaller key.
      if (same_metrics || dominates(m, r)) {
        drop = true;
        break;
      }
    }
    if (!drop) kept.push_back(rec);
  }

  std::vector<EvaluationRecord> frontier;
  frontier.reserve(kept.size());
  for (const auto* rec : kept) frontier.push_back(*rec);
  std::sort(frontier.begin(), frontier.end(), [](const auto& a, const auto& b) {
    return std::tie(a.metrics.model_size_bytes, a.key) < std::tie(b.metrics.model_size_bytes, b.key);
  });
  return frontier;
}

}  // namespace danas
