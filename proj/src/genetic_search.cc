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

#include "danas/genetic_search.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numeric>
#include <tuple>
#include <unordered_set>

#include "danas/config_error.h"

namespace danas {

namespace {

constexpr int kDistinctDrawAttempts = 100;

template <typename T>
std::size_t index_of(const std::vector<T>& set, const T& value) {
  return static_cast<std::size_t>(std::find(set.begin(), set.end(), value) - set.begin());
}

// One step along an ordered set; reverses at either end.
template <typename T>
T step_ordinal(const std::vector<T>& set, const T& value, Direction direction) {
  const std::size_t i = index_of(set, value);
  const bool can_up = i + 1 < set.size();
  const bool can_down = i > 0 && i < set.size();
  if ((direction == Direction::kUp && can_up) || !can_down) return set[std::min(i + 1, set.size() - 1)];
  return set[i - 1];
}

template <typename T>
T switch_categorical(const std::vector<T>& set, const T& value, Rng& rng) {
  std::vector<T> others;
  for (const auto& v : set) {
    if (!(v == value)) others.push_back(v);
  }
  if (others.empty()) return value;
  return others[rng.uniform_index(others.size())];
}

bool is_ordinal(Locus::Kind kind) {
  return kind == Locus::Kind::kSampleRate || kind == Locus::Kind::kLayerCount ||
         kind == Locus::Kind::kFilters || kind == Locus::Kind::kKernelSize;
}

}  // namespace

void GaConfig::validate() const {
  if (population_size < 2) throw ConfigError("ga.population_size", "must be >= 2");
  if (!(update_ratio > 0.0 && update_ratio <= 1.0)) {
    throw ConfigError("ga.update_ratio", "must be in (0, 1]");
  }
  if (!(crossover_ratio >= 0.0 && crossover_ratio <= 1.0)) {
    throw ConfigError("ga.crossover_ratio", "must be in [0, 1]");
  }
  if (eval_budget < population_size) {
    throw ConfigError("ga.eval_budget", "must be >= ga.population_size (" +
                                            std::to_string(eval_budget) + " < " +
                                            std::to_string(population_size) + ")");
  }
  if (tournament_size < 2) throw ConfigError("ga.tournament_size", "must be >= 2");
  if (workers < 1) throw ConfigError("ga.workers", "must be >= 1");
  if (max_stall_generations < 1) throw ConfigError("ga.max_stall_generations", "must be >= 1");
}

int GaConfig::offspring_per_generation() const {
  const auto n = static_cast<int>(std::lround(population_size * update_ratio));
  return std::clamp(n, 1, population_size - 1);
}

bool fitter(const Member& a, const Member& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  if (a.metrics.model_size_bytes != b.metrics.model_size_bytes) {
    return a.metrics.model_size_bytes < b.metrics.model_size_bytes;
  }
  return a.key < b.key;
}

double best_fitness(const Population& population) {
  double best = 0.0;
  for (const auto& m : population.members) best = std::max(best, m.fitness);
  return best;
}

std::vector<Locus> mutable_loci(const Genome& genome, const SearchSpace& space) {
  using K = Locus::Kind;
  std::vector<Locus> loci;
  if (space.sample_rates.size() > 1) loci.push_back({K::kSampleRate});
  if (space.preprocessing_types.size() > 1) loci.push_back({K::kPreprocessing});
  if (space.layers_max > space.layers_min) loci.push_back({K::kLayerCount});
  for (int i = 0; i < static_cast<int>(genome.layers.size()); ++i) {
    if (space.filters.size() > 1) loci.push_back({K::kFilters, i});
    if (space.kernel_sizes.size() > 1) loci.push_back({K::kKernelSize, i});
    if (space.activations.size() > 1) loci.push_back({K::kActivation, i});
  }
  return loci;
}

Genome mutate_at(const Genome& genome, const SearchSpace& space, const Locus& locus,
                 Direction direction, Rng& rng) {
  using K = Locus::Kind;
  Genome child = genome;
  switch (locus.kind) {
    case K::kSampleRate:
      child.data.sample_rate_hz = step_ordinal(space.sample_rates, genome.data.sample_rate_hz, direction);
      break;
    case K::kPreprocessing:
      child.data.preprocessing = switch_categorical(space.preprocessing_types, genome.data.preprocessing, rng);
      break;
    case K::kLayerCount: {
      const auto n = static_cast<int>(genome.layers.size());
      const bool grow = (direction == Direction::kUp && n < space.layers_max) || n <= space.layers_min;
      if (grow) {
        child.layers.push_back(trivial_layer(space));
      } else {
        child.layers.pop_back();
      }
      break;
    }
    case K::kFilters: {
      auto& layer = child.layers[static_cast<std::size_t>(locus.layer)];
      layer.filters = step_ordinal(space.filters, layer.filters, direction);
      break;
    }
    case K::kKernelSize: {
      auto& layer = child.layers[static_cast<std::size_t>(locus.layer)];
      layer.kernel_size = step_ordinal(space.kernel_sizes, layer.kernel_size, direction);
      break;
    }
    case K::kActivation: {
      auto& layer = child.layers[static_cast<std::size_t>(locus.layer)];
      layer.activation = switch_categorical(space.activations, layer.activation, rng);
      break;
    }
  }
  return child;
}

Genome mutate(const Genome& genome, const SearchSpace& space, Rng& rng) {
  const auto loci = mutable_loci(genome, space);
  if (loci.empty()) return genome;
  const Locus& locus = loci[rng.uniform_index(loci.size())];
  const Direction direction =
      is_ordinal(locus.kind) && rng.coin() ? Direction::kUp : Direction::kDown;
  return mutate_at(genome, space, locus, direction, rng);
}

Genome crossover(const Genome& a, const Genome& b, const SearchSpace& /*space*/, Rng& rng) {
  Genome child;
  child.data.sample_rate_hz = rng.coin() ? a.data.sample_rate_hz : b.data.sample_rate_hz;
  child.data.preprocessing = rng.coin() ? a.data.preprocessing : b.data.preprocessing;
  const std::size_t n = rng.coin() ? a.layers.size() : b.layers.size();
  child.layers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < a.layers.size() && i < b.layers.size()) {
      LayerGene layer;
      layer.filters = rng.coin() ? a.layers[i].filters : b.layers[i].filters;
      layer.kernel_size = rng.coin() ? a.layers[i].kernel_size : b.layers[i].kernel_size;
      layer.activation = rng.coin() ? a.layers[i].activation : b.layers[i].activation;
      child.layers.push_back(layer);
    } else {
      child.layers.push_back(i < a.layers.size() ? a.layers[i] : b.layers[i]);
    }
  }
  return child;
}

std::size_t tournament_select_index(const Population& population, int k, Rng& rng) {
  const auto& members = population.members;
  std::size_t best = rng.uniform_index(members.size());
  for (int draw = 1; draw < k; ++draw) {
    const std::size_t candidate = rng.uniform_index(members.size());
    if (fitter(members[candidate], members[best])) best = candidate;
  }
  return best;
}

const Genome& tournament_select(const Population& population, int k, Rng& rng) {
  return population.members[tournament_select_index(population, k, rng)].genome;
}

GeneticSearch::GeneticSearch(GaConfig cfg, SearchSpace space, SearchContext ctx, Evaluator& evaluator,
                             RecordSink sink)
    : cfg_(std::move(cfg)),
      space_(std::move(space)),
      ctx_(std::move(ctx)),
      evaluator_(evaluator),
      sink_(std::move(sink)),
      rng_(cfg_.seed) {
  ctx_.train.seed = cfg_.seed;
  if (!ctx_.clock) ctx_.clock = utc_timestamp;
}

std::size_t GeneticSearch::remaining_budget() const {
  const auto budget = static_cast<std::size_t>(cfg_.eval_budget);
  return evaluations_ >= budget ? 0 : budget - evaluations_;
}

std::vector<Member> GeneticSearch::evaluate(const std::vector<Genome>& genomes, int generation) {
  auto outcome = evaluate_batch(genomes, ctx_.dsp, ctx_.train, evaluator_, cache_, cfg_.workers,
                                next_request_id_);
  std::vector<Member> members;
  members.reserve(genomes.size());
  const std::string source = evaluator_.source();
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    Member m;
    m.genome = genomes[i];
    m.key = canonical_encode(genomes[i]);
    m.metrics = std::move(outcome.items[i].metrics);
    m.fitness = scalar_fitness(m.metrics, ctx_.objective);
    if (outcome.items[i].fresh) {
      ++evaluations_;
      EvaluationRecord rec;
      rec.seq = log_.size() + 1;
      rec.generation = generation;
      rec.key = m.key;
      rec.genome = m.genome;
      rec.metrics = m.metrics;
      rec.fitness = m.fitness;
      rec.source = source;
      rec.timestamp = ctx_.clock();
      log_.push_back(rec);
      if (sink_) sink_(log_.back());
    } else {
      ++cache_hits_;
    }
    members.push_back(std::move(m));
  }
  return members;
}

Population GeneticSearch::initialize() {
  const auto n = static_cast<std::size_t>(cfg_.population_size);
  std::vector<Genome> genomes;
  std::unordered_set<std::string> seen;
  auto accept = [&](Genome g) {
    seen.insert(canonical_encode(g));
    genomes.push_back(std::move(g));
  };
  // Draws until `draw` yields an unseen genome or attempts run out.
  auto distinct = [&](auto&& draw) -> std::optional<Genome> {
    for (int attempt = 0; attempt < kDistinctDrawAttempts; ++attempt) {
      Genome g = draw();
      if (!seen.count(canonical_encode(g))) return g;
    }
    return std::nullopt;
  };

  if (cfg_.init_mode == InitMode::kTrivial) {
    const Genome root = trivial_genome(space_);
    accept(root);
    while (genomes.size() < n) {
      auto g = distinct([&] { return mutate(root, space_, rng_); });
      // Single mutations of the root can run out quickly (the default space
      // has seven); continue from a random member instead.
      if (!g) g = distinct([&] { return mutate(genomes[rng_.uniform_index(genomes.size())], space_, rng_); });
      accept(g ? std::move(*g) : mutate(root, space_, rng_));
    }
  } else {
    while (genomes.size() < n) {
      auto g = distinct([&] { return random_genome(space_, rng_); });
      accept(g ? std::move(*g) : random_genome(space_, rng_));
    }
  }

  Population population;
  population.members = evaluate(genomes, 0);
  return population;
}

Genome GeneticSearch::make_offspring(const Population& population) {
  if (rng_.bernoulli(cfg_.crossover_ratio)) {
    const Genome& a = tournament_select(population, cfg_.tournament_size, rng_);
    const Genome& b = tournament_select(population, cfg_.tournament_size, rng_);
    return crossover(a, b, space_, rng_);
  }
  return mutate(tournament_select(population, cfg_.tournament_size, rng_), space_, rng_);
}

std::size_t GeneticSearch::step_generation(Population& population) {
  const int n_new = cfg_.offspring_per_generation();
  std::vector<Genome> offspring;
  offspring.reserve(static_cast<std::size_t>(n_new));
  for (int j = 0; j < n_new; ++j) offspring.push_back(make_offspring(population));

  // Keep offspring up to the point where the next fresh evaluation would
  // exceed the budget.
  const std::size_t remaining = remaining_budget();
  std::unordered_set<std::string> fresh;
  std::size_t keep = 0;
  for (; keep < offspring.size(); ++keep) {
    const std::string key = canonical_encode(offspring[keep]);
    if (cache_.contains(key) || fresh.count(key)) continue;
    if (fresh.size() == remaining) break;
    fresh.insert(key);
  }
  offspring.resize(keep);

  const std::size_t before = evaluations_;
  auto children = evaluate(offspring, population.generation_index + 1);

  std::vector<std::size_t> order(population.members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return fitter(population.members[a], population.members[b]);
  });
  std::vector<std::size_t> slots(order.end() - static_cast<std::ptrdiff_t>(children.size()), order.end());
  std::sort(slots.begin(), slots.end());
  for (std::size_t j = 0; j < children.size(); ++j) {
    population.members[slots[j]] = std::move(children[j]);
  }
  ++population.generation_index;
  return evaluations_ - before;
}

SearchResult run_search(const GaConfig& cfg, const SearchSpace& space, const SearchContext& ctx,
                        Evaluator& evaluator, RecordSink sink) {
  cfg.validate();
  require_well_formed(space);

  GeneticSearch search(cfg, space, ctx, evaluator, std::move(sink));
  SearchResult result;
  result.population = search.initialize();
  result.best_fitness_by_generation.push_back(best_fitness(result.population));

  int stalled = 0;
  while (search.remaining_budget() > 0) {
    const std::size_t fresh = search.step_generation(result.population);
    ++result.generations;
    result.best_fitness_by_generation.push_back(best_fitness(result.population));
    if (fresh > 0) {
      stalled = 0;
    } else if (++stalled >= cfg.max_stall_generations) {
      result.exhausted = true;
      break;
    }
  }

  result.log = search.log();
  result.frontier = pareto_frontier(result.log);
  result.unique_evaluations = search.unique_evaluations();
  result.cache_hits = search.cache_hits();
  return result;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t secs = std::chrono::system_clock::to_time_t(now);
  const auto millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(millis));
  return out;
}

}  // namespace danas
