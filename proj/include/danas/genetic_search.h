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

#ifndef DANAS_GENETIC_SEARCH_H_
#define DANAS_GENETIC_SEARCH_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "danas/dsp.h"
#include "danas/evaluation.h"
#include "danas/objectives.h"
#include "danas/random.h"
#include "danas/search_space.h"

namespace danas {

enum class InitMode { kTrivial, kRandom };

struct GaConfig {
  int population_size = 10;
  double update_ratio = 0.5;
  double crossover_ratio = 0.2;  // probability that an offspring is a crossover
  int eval_budget = 300;
  int tournament_size = 2;
  InitMode init_mode = InitMode::kTrivial;
  uint64_t seed = 1;
  int workers = 1;  // concurrent evaluations per generation
  // Consecutive generations without a new evaluation before the run is
  // declared exhausted (the space may be smaller than the budget).
  int max_stall_generations = 1000;

  // Throws ConfigError naming the field ("ga.<name>").
  void validate() const;
  // round(population_size * update_ratio), kept in [1, population_size - 1]
  // so the fittest member always survives.
  int offspring_per_generation() const;
};

struct Member {
  Genome genome;
  std::string key;
  MetricsRecord metrics;
  double fitness = 0.0;
};

struct Population {
  std::vector<Member> members;
  int generation_index = 0;
};

// True if `a` ranks strictly ahead of `b`: higher fitness, then smaller
// model, then smaller key.
bool fitter(const Member& a, const Member& b);

double best_fitness(const Population& population);

// --- Variation operators ----------------------------------------------------

struct Locus {
  enum class Kind { kSampleRate, kPreprocessing, kLayerCount, kFilters, kKernelSize, kActivation };
  Kind kind = Kind::kSampleRate;
  int layer = -1;  // for per-layer loci

  friend bool operator==(const Locus&, const Locus&) = default;
};

enum class Direction { kDown, kUp };

// Loci whose value set has more than one member.
std::vector<Locus> mutable_loci(const Genome& genome, const SearchSpace& space);

// Moves one ordinal locus one position in `direction` (reversed at a
// boundary), or switches a categorical locus to a uniformly drawn other
// value. Layer-count increases append a trivial layer; decreases drop the
// last layer.
Genome mutate_at(const Genome& genome, const SearchSpace& space, const Locus& locus,
                 Direction direction, Rng& rng);

// Uniform locus, uniform direction. Returns the input if nothing can move.
Genome mutate(const Genome& genome, const SearchSpace& space, Rng& rng);

// Gene-wise uniform crossover; the layer count comes from either parent.
Genome crossover(const Genome& a, const Genome& b, const SearchSpace& space, Rng& rng);

std::size_t tournament_select_index(const Population& population, int k, Rng& rng);
const Genome& tournament_select(const Population& population, int k, Rng& rng);

// --- Search loop ------------------------------------------------------------

struct SearchContext {
  dsp::DspConfig dsp;
  ObjectiveConfig objective;
  TrainSettings train;  // train.seed is overwritten with the GA seed
  // Produces the log timestamp; defaults to the UTC wall clock.
  std::function<std::string()> clock;
};

using RecordSink = std::function<void(const EvaluationRecord&)>;

struct SearchResult {
  std::vector<EvaluationRecord> log;
  std::vector<EvaluationRecord> frontier;
  Population population;
  int generations = 0;
  std::size_t unique_evaluations = 0;
  std::size_t cache_hits = 0;
  bool exhausted = false;  // stopped by the stall guard before the budget
  std::vector<double> best_fitness_by_generation;  // index 0 = initial population
};

// Stateful driver for one run. run_search() below is the usual entry point;
// the pieces are exposed for testing.
class GeneticSearch {
 public:
  GeneticSearch(GaConfig cfg, SearchSpace space, SearchContext ctx, Evaluator& evaluator,
                RecordSink sink = {});

  Population initialize();
  // Produces up to offspring_per_generation() offspring (fewer only when
  // the remaining budget runs out), evaluates them and replaces the worst
  // members. Returns the number of fresh evaluations.
  std::size_t step_generation(Population& population);

  std::size_t unique_evaluations() const { return evaluations_; }
  std::size_t cache_hits() const { return cache_hits_; }
  std::size_t remaining_budget() const;
  const std::vector<EvaluationRecord>& log() const { return log_; }
  EvaluationCache& cache() { return cache_; }
  Rng& rng() { return rng_; }

 private:
  Genome make_offspring(const Population& population);
  std::vector<Member> evaluate(const std::vector<Genome>& genomes, int generation);

  GaConfig cfg_;
  SearchSpace space_;
  SearchContext ctx_;
  Evaluator& evaluator_;
  RecordSink sink_;
  Rng rng_;
  EvaluationCache cache_;
  std::vector<EvaluationRecord> log_;
  std::size_t evaluations_ = 0;
  std::size_t cache_hits_ = 0;
  uint64_t next_request_id_ = 1;
};

// Throws ConfigError for an invalid GaConfig and InvalidSearchSpace for a
// malformed space.
SearchResult run_search(const GaConfig& cfg, const SearchSpace& space, const SearchContext& ctx,
                        Evaluator& evaluator, RecordSink sink = {});

std::string utc_timestamp();

}  // namespace danas

#endif  // DANAS_GENETIC_SEARCH_H_
