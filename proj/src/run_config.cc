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

#include "danas/run_config.h"

#include <bit>
#include <fstream>
#include <set>

namespace danas {

namespace {

using nlohmann::json;

// Typed access to one JSON object with dotted-path error messages.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "must be an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [key, value] : j_.items()) {
      if (!known.count(key)) throw ConfigError(name(key), "unknown key");
    }
  }

  const json* find(const char* key) const {
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void get(const char* key, int& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(name(key), "must be an integer");
      out = v->get<int>();
    }
  }

  void get(const char* key, uint64_t& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<int64_t>() >= 0)) throw ConfigError(name(key), "must be a non-negative integer");
      out = v->get<uint64_t>();
    }
  }

  void get(const char* key, double& out) const {
    if (const json* v = find(key)) {
      if (!v->is_number()) throw ConfigError(name(key), "must be a number");
      out = v->get<double>();
    }
  }

  void get(const char* key, std::string& out) const {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(name(key), "must be a string");
      out = v->get<std::string>();
    }
  }

  void get(const char* key, std::vector<int>& out) const {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(name(key), "must be an array of integers");
      out.clear();
      for (const auto& item : *v) {
        if (!item.is_number_integer()) throw ConfigError(name(key), "must be an array of integers");
        out.push_back(item.get<int>());
      }
    }
  }

  template <typename Enum, typename Parse>
  void get_enums(const char* key, std::vector<Enum>& out, Parse parse) const {
    if (const json* v = find(key)) {
      if (!v->is_array()) throw ConfigError(name(key), "must be an array of strings");
      out.clear();
      for (const auto& item : *v) {
        const auto parsed = item.is_string() ? parse(item.get<std::string>()) : std::nullopt;
        if (!parsed) throw ConfigError(name(key), "unknown value " + item.dump());
        out.push_back(*parsed);
      }
    }
  }

  std::optional<Section> child(const char* key) const {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, name(key));
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
};

// "field: reason" problem strings from the check() helpers.
[[noreturn]] void raise_problem(const std::string& section, const std::string& problem) {
  const auto colon = problem.find(':');
  if (colon == std::string::npos) throw ConfigError(section, problem);
  const auto reason = problem.substr(colon + 1);
  throw ConfigError(section + "." + problem.substr(0, colon),
                    reason.empty() || reason[0] != ' ' ? reason : reason.substr(1));
}

std::optional<Activation> parse_activation_long(const std::string& s) {
  if (s != "RELU" && s != "SIGMOID") return std::nullopt;
  return parse_activation(s);
}

}  // namespace

SearchSpace RunConfig::effective_space() const {
  return fixed_data ? space.with_fixed_data(*fixed_data) : space;
}

void RunConfig::validate() const {
  ga.validate();
  for (const auto& p : space.check()) raise_problem("space", p);
  for (const auto& p : dsp.check()) raise_problem("dsp", p);
  for (const auto& p : estimator.check()) raise_problem("estimator", p);
  if (!(objective.approx_model_size_range > 0.0)) {
    throw ConfigError("objective.approx_model_size_range", "must be > 0");
  }
  if (train.epochs < 1) throw ConfigError("train.epochs", "must be >= 1");
  if (train.batch_size < 1) throw ConfigError("train.batch_size", "must be >= 1");
  if (evaluator.kind == EvaluatorKind::kExternal && evaluator.worker_command.empty()) {
    throw ConfigError("evaluator.worker_command", "required when evaluator.kind is external");
  }
  if (!(evaluator.timeout_s > 0.0)) throw ConfigError("evaluator.timeout_s", "must be > 0");
  if (evaluator.pool_size < 1) throw ConfigError("evaluator.pool_size", "must be >= 1");
  if (fixed_data && fixed_data->sample_rate_hz <= 0) {
    throw ConfigError("fixed_data.sample_rate_hz", "must be positive");
  }
  // Features are produced by halving the source rate, so every rate must
  // be source_rate / 2^k.
  auto reachable = [&](int hz) {
    return hz > 0 && dsp.source_rate_hz % hz == 0 &&
           std::has_single_bit(static_cast<unsigned>(dsp.source_rate_hz / hz));
  };
  for (int hz : space.sample_rates) {
    if (!reachable(hz)) {
      throw ConfigError("space.sample_rates", std::to_string(hz) + " Hz is not dsp.source_rate_hz / 2^k");
    }
  }
  if (fixed_data && !reachable(fixed_data->sample_rate_hz)) {
    throw ConfigError("fixed_data.sample_rate_hz",
                      std::to_string(fixed_data->sample_rate_hz) + " Hz is not dsp.source_rate_hz / 2^k");
  }
}

RunConfig parse_run_config(const json& j) {
  RunConfig cfg;
  const Section root(j, "");
  root.allow({"ga", "space", "dsp", "objective", "estimator", "train", "evaluator", "fixed_data"});

  if (auto s = root.child("ga")) {
    s->allow({"population_size", "update_ratio", "crossover_ratio", "eval_budget", "tournament_size",
              "init_mode", "seed", "workers", "max_stall_generations"});
    s->get("population_size", cfg.ga.population_size);
    s->get("update_ratio", cfg.ga.update_ratio);
    s->get("crossover_ratio", cfg.ga.crossover_ratio);
    s->get("eval_budget", cfg.ga.eval_budget);
    s->get("tournament_size", cfg.ga.tournament_size);
    s->get("seed", cfg.ga.seed);
    s->get("workers", cfg.ga.workers);
    s->get("max_stall_generations", cfg.ga.max_stall_generations);
    std::string mode = cfg.ga.init_mode == InitMode::kTrivial ? "TRIVIAL" : "RANDOM";
    s->get("init_mode", mode);
    if (mode == "TRIVIAL") {
      cfg.ga.init_mode = InitMode::kTrivial;
    } else if (mode == "RANDOM") {
      cfg.ga.init_mode = InitMode::kRandom;
    } else {
      throw ConfigError("ga.init_mode", "must be TRIVIAL or RANDOM");
    }
  }

  if (auto s = root.child("space")) {
    s->allow({"sample_rates", "preprocessing_types", "layers_min", "layers_max", "filters",
              "kernel_sizes", "activations"});
    s->get("sample_rates", cfg.space.sample_rates);
    s->get_enums("preprocessing_types", cfg.space.preprocessing_types,
                 [](const std::string& v) { return parse_preprocessing(v); });
    s->get("layers_min", cfg.space.layers_min);
    s->get("layers_max", cfg.space.layers_max);
    s->get("filters", cfg.space.filters);
    s->get("kernel_sizes", cfg.space.kernel_sizes);
    s->get_enums("activations", cfg.space.activations, parse_activation_long);
  }

  if (auto s = root.child("dsp")) {
    s->allow({"window_s", "frame_size", "hop_length", "n_mels", "n_mfcc", "sample_bits",
              "source_rate_hz"});
    s->get("window_s", cfg.dsp.window_s);
    s->get("frame_size", cfg.dsp.frame_size);
    s->get("hop_length", cfg.dsp.hop_length);
    s->get("n_mels", cfg.dsp.n_mels);
    s->get("n_mfcc", cfg.dsp.n_mfcc);
    s->get("sample_bits", cfg.dsp.sample_bits);
    s->get("source_rate_hz", cfg.dsp.source_rate_hz);
  }

  if (auto s = root.child("objective")) {
    s->allow({"approx_model_size_range"});
    s->get("approx_model_size_range", cfg.objective.approx_model_size_range);
  }

  if (auto s = root.child("estimator")) {
    s->allow({"bytes_per_weight", "serialization_overhead_bytes", "dense_width", "n_classes"});
    s->get("bytes_per_weight", cfg.estimator.bytes_per_weight);
    s->get("serialization_overhead_bytes", cfg.estimator.serialization_overhead_bytes);
    s->get("dense_width", cfg.estimator.dense_width);
    s->get("n_classes", cfg.estimator.n_classes);
  }

  if (auto s = root.child("train")) {
    s->allow({"epochs", "batch_size", "dataset_dir"});
    s->get("epochs", cfg.train.epochs);
    s->get("batch_size", cfg.train.batch_size);
    s->get("dataset_dir", cfg.train.dataset_dir);
  }

  if (auto s = root.child("evaluator")) {
    s->allow({"kind", "worker_command", "timeout_s", "pool_size"});
    std::string kind = cfg.evaluator.kind == EvaluatorKind::kSynthetic ? "synthetic" : "external";
    s->get("kind", kind);
    if (kind == "synthetic") {
      cfg.evaluator.kind = EvaluatorKind::kSynthetic;
    } else if (kind == "external") {
      cfg.evaluator.kind = EvaluatorKind::kExternal;
    } else {
      throw ConfigError("evaluator.kind", "must be synthetic or external");
    }
    s->get("worker_command", cfg.evaluator.worker_command);
    s->get("timeout_s", cfg.evaluator.timeout_s);
    s->get("pool_size", cfg.evaluator.pool_size);
  }

  if (const json* fd = root.find("fixed_data"); fd && !fd->is_null()) {
    const Section s(*fd, "fixed_data");
    s.allow({"sample_rate_hz", "preprocessing"});
    if (!s.find("sample_rate_hz") || !s.find("preprocessing")) {
      throw ConfigError("fixed_data", "needs both sample_rate_hz and preprocessing");
    }
    DataGenome data;
    s.get("sample_rate_hz", data.sample_rate_hz);
    std::string pt;
    s.get("preprocessing", pt);
    const auto parsed = parse_preprocessing(pt);
    if (!parsed) throw ConfigError("fixed_data.preprocessing", "must be SP, MS or MFCC");
    data.preprocessing = *parsed;
    cfg.fixed_data = data;
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (j.is_discarded()) throw ConfigError("<file>", path.string() + " is not valid JSON");
  return parse_run_config(j);
}

json to_json(const RunConfig& cfg) {
  json pts = json::array();
  for (auto pt : cfg.space.preprocessing_types) pts.push_back(preprocessing_code(pt));
  json afs = json::array();
  for (auto af : cfg.space.activations) afs.push_back(activation_name(af));

  json j = {
      {"ga",
       {{"population_size", cfg.ga.population_size},
        {"update_ratio", cfg.ga.update_ratio},
        {"crossover_ratio", cfg.ga.crossover_ratio},
        {"eval_budget", cfg.ga.eval_budget},
        {"tournament_size", cfg.ga.tournament_size},
        {"init_mode", cfg.ga.init_mode == InitMode::kTrivial ? "TRIVIAL" : "RANDOM"},
        {"seed", cfg.ga.seed},
        {"workers", cfg.ga.workers},
        {"max_stall_generations", cfg.ga.max_stall_generations}}},
      {"space",
       {{"sample_rates", cfg.space.sample_rates},
        {"preprocessing_types", pts},
        {"layers_min", cfg.space.layers_min},
        {"layers_max", cfg.space.layers_max},
        {"filters", cfg.space.filters},
        {"kernel_sizes", cfg.space.kernel_sizes},
        {"activations", afs}}},
      {"dsp",
       {{"window_s", cfg.dsp.window_s},
        {"frame_size", cfg.dsp.frame_size},
        {"hop_length", cfg.dsp.hop_length},
        {"n_mels", cfg.dsp.n_mels},
        {"n_mfcc", cfg.dsp.n_mfcc},
        {"sample_bits", cfg.dsp.sample_bits},
        {"source_rate_hz", cfg.dsp.source_rate_hz}}},
      {"objective", {{"approx_model_size_range", cfg.objective.approx_model_size_range}}},
      {"estimator",
       {{"bytes_per_weight", cfg.estimator.bytes_per_weight},
        {"serialization_overhead_bytes", cfg.estimator.serialization_overhead_bytes},
        {"dense_width", cfg.estimator.dense_width},
        {"n_classes", cfg.estimator.n_classes}}},
      {"train",
       {{"epochs", cfg.train.epochs},
        {"batch_size", cfg.train.batch_size},
        {"dataset_dir", cfg.train.dataset_dir}}},
      {"evaluator",
       {{"kind", cfg.evaluator.kind == EvaluatorKind::kSynthetic ? "synthetic" : "external"},
        {"worker_command", cfg.evaluator.worker_command},
        {"timeout_s", cfg.evaluator.timeout_s},
        {"pool_size", cfg.evaluator.pool_size}}},
      {"fixed_data", nullptr}};
  if (cfg.fixed_data) {
    j["fixed_data"] = {{"sample_rate_hz", cfg.fixed_data->sample_rate_hz},
                       {"preprocessing", preprocessing_code(cfg.fixed_data->preprocessing)}};
  }
  return j;
}

}  // namespace danas
