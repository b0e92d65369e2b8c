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

#ifndef DANAS_TESTS_FRONTIER_ORACLE_H_
#define DANAS_TESTS_FRONTIER_ORACLE_H_

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "danas/objectives.h"
#include "danas/random.h"

namespace danas::testing {

// Brute-force reference: collapse keys, keep every record no other record
// dominates, keep one representative per identical metric tuple.
inline std::vector<EvaluationRecord> brute_force_frontier(const std::vector<EvaluationRecord>& log) {
  std::map<std::string, EvaluationRecord> best;
  for (const auto& r : log) {
    if (!r.metrics.feasible) continue;
    auto it = best.find(r.key);
    if (it == best.end()) {
      best.emplace(r.key, r);
    } else if (r.fitness > it->second.fitness) {
      it->second = r;
    }
  }
  std::vector<EvaluationRecord> pool;
  for (auto& [k, r] : best) pool.push_back(r);

  std::vector<EvaluationRecord> out;
  for (const auto& r : pool) {
    bool dominated = false;
    bool shadowed = false;
    for (const auto& s : pool) {
      if (dominates(s.metrics, r.metrics)) dominated = true;
      const bool same = s.metrics.accuracy == r.metrics.accuracy &&
                        s.metrics.precision == r.metrics.precision &&
                        s.metrics.recall == r.metrics.recall &&
                        s.metrics.model_size_bytes == r.metrics.model_size_bytes;
      if (same && s.key < r.key) shadowed = true;
    }
    if (!dominated && !shadowed) out.push_back(r);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.metrics.model_size_bytes != b.metrics.model_size_bytes) {
      return a.metrics.model_size_bytes < b.metrics.model_size_bytes;
    }
    return a.key < b.key;
  });
  return out;
}

inline std::vector<EvaluationRecord> random_log(Rng& rng, std::size_t n) {
  // Coarse value grids so ties and duplicate keys actually occur.
  std::vector<EvaluationRecord> log;
  for (std::size_t i = 0; i < n; ++i) {
    MetricsRecord m;
    m.accuracy = rng.uniform_int(0, 20) / 20.0;
    m.precision = rng.uniform_int(0, 20) / 20.0;
    m.recall = rng.uniform_int(0, 20) / 20.0;
    m.model_size_bytes = static_cast<uint64_t>(rng.uniform_int(1, 60)) * 500;
    m.feasible = true;
    if (rng.uniform_index(20) == 0) m = MetricsRecord::infeasible("crash");
    EvaluationRecord r;
    r.key = "k" + std::to_string(rng.uniform_index(n + 1));
    r.metrics = m;
    r.fitness = scalar_fitness(m, ObjectiveConfig{});
    r.seq = i + 1;
    log.push_back(r);
  }
  return log;
}

}  // namespace danas::testing

#endif  // DANAS_TESTS_FRONTIER_ORACLE_H_
