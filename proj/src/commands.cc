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

#include "danas/commands.h"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "danas/config_error.h"
#include "danas/evaluation.h"
#include "danas/genetic_search.h"
#include "danas/model_estimator.h"
#include "danas/objectives.h"
#include "danas/results_log.h"
#include "danas/run_config.h"
#include "danas/worker.h"

namespace danas::cli {

namespace {

using nlohmann::json;

std::filesystem::path with_suffix(const std::filesystem::path& p, const char* suffix) {
  return std::filesystem::path(p.string() + suffix);
}

bool write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
  return static_cast<bool>(out);
}

RunConfig config_from(const std::optional<std::filesystem::path>& path) {
  return path ? load_run_config(*path) : RunConfig{};
}

// Throws ConfigError or GenomeParseError for unusable arguments.
Genome genome_from(const GenomeArgs& args, bool need_layers) {
  if (args.key) return decode_genome(*args.key);
  Genome g;
  if (!args.sample_rate_hz) throw ConfigError("--sr", "required when --genome is not given");
  if (!args.preprocessing) throw ConfigError("--pt", "required when --genome is not given");
  g.data.sample_rate_hz = *args.sample_rate_hz;
  const auto pt = parse_preprocessing(*args.preprocessing);
  if (!pt) throw ConfigError("--pt", "must be SP, MS or MFCC");
  g.data.preprocessing = *pt;
  for (const auto& spec : args.layers) {
    LayerGene layer;
    char af[16] = {};
    if (std::sscanf(spec.c_str(), "%d,%d,%15s", &layer.filters, &layer.kernel_size, af) != 3) {
      throw ConfigError("--layer", "expected FILTERS,KERNEL,ACTIVATION, got '" + spec + "'");
    }
    const auto act = parse_activation(af);
    if (!act) throw ConfigError("--layer", "unknown activation '" + std::string(af) + "'");
    layer.activation = *act;
    g.layers.push_back(layer);
  }
  if (need_layers && g.layers.empty()) throw ConfigError("--layer", "at least one layer is required");
  return g;
}

std::string shape_text(const dsp::FeatureShape& s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols) + "x" + std::to_string(s.channels);
}

}  // namespace

int cmd_search(const SearchArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = config_from(args.config);
    if (args.seed) cfg.ga.seed = *args.seed;
    if (args.evaluator) {
      if (*args.evaluator == "synthetic") {
        cfg.evaluator.kind = EvaluatorKind::kSynthetic;
      } else if (*args.evaluator == "external") {
        cfg.evaluator.kind = EvaluatorKind::kExternal;
      } else {
        throw ConfigError("--evaluator", "must be synthetic or external");
      }
    }
    if (args.worker_cmd) cfg.evaluator.worker_command = *args.worker_cmd;
    if (args.fixed_sr.has_value() != args.fixed_pt.has_value()) {
      throw ConfigError("--fixed-sr/--fixed-pt", "must be given together");
    }
    if (args.fixed_sr) {
      const auto pt = parse_preprocessing(*args.fixed_pt);
      if (!pt) throw ConfigError("--fixed-pt", "must be SP, MS or MFCC");
      cfg.fixed_data = DataGenome{*args.fixed_sr, *pt};
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::unique_ptr<Evaluator> evaluator;
  if (cfg.evaluator.kind == EvaluatorKind::kSynthetic) {
    evaluator = std::make_unique<SyntheticEvaluator>(cfg.estimator);
  } else {
    ExternalEvaluatorOptions options;
    options.command = cfg.evaluator.worker_command;
    options.timeout = std::chrono::milliseconds(static_cast<long long>(cfg.evaluator.timeout_s * 1000));
    options.pool_size = cfg.evaluator.pool_size;
    try {
      evaluator = std::make_unique<ExternalEvaluator>(options);
    } catch (const WorkerError& e) {
      err << "worker error: " << e.what() << '\n';
      return kExitFailure;
    }
  }

  LogWriter writer(args.out);
  if (!writer.ok()) {
    err << "I/O error: cannot write " << args.out << '\n';
    return kExitFailure;
  }

  SearchContext ctx;
  ctx.dsp = cfg.dsp;
  ctx.objective = cfg.objective;
  ctx.train = cfg.train;

  SearchResult result;
  try {
    result = run_search(cfg.ga, cfg.effective_space(), ctx, *evaluator,
                        [&](const EvaluationRecord& rec) { writer.append(rec); });
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidSearchSpace& e) {
    err << "config error: space: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!writer.ok()) {
    err << "I/O error: failed writing " << args.out << '\n';
    return kExitFailure;
  }

  const double best = result.best_fitness_by_generation.empty()
                          ? 0.0
                          : result.best_fitness_by_generation.back();
  const json summary = {{"generations", result.generations},
                        {"unique_evaluations", result.unique_evaluations},
                        {"cache_hits", result.cache_hits},
                        {"best_fitness", best},
                        {"frontier_size", result.frontier.size()},
                        {"exhausted", result.exhausted},
                        {"seed", cfg.ga.seed}};
  const bool wrote = write_file(with_suffix(args.out, ".pareto.csv"), frontier_csv(result.frontier)) &&
                     write_file(with_suffix(args.out, ".summary.json"), summary.dump(2) + "\n") &&
                     write_file(with_suffix(args.out, ".config.json"), to_json(cfg).dump(2) + "\n");
  if (!wrote) {
    err << "I/O error: cannot write result files next to " << args.out << '\n';
    return kExitFailure;
  }

  out << "generations: " << result.generations << '\n'
      << "unique evaluations: " << result.unique_evaluations << '\n'
      << "cache hits: " << result.cache_hits << '\n'
      << "best fitness: " << best << '\n'
      << "frontier size: " << result.frontier.size() << '\n';
  if (result.exhausted) out << "stopped early: no new genomes found (search space exhausted?)\n";
  return kExitOk;
}

int cmd_pareto(const std::filesystem::path& log_path, std::ostream& out, std::ostream& err) {
  std::ifstream in(log_path);
  if (!in) {
    err << "I/O error: cannot open " << log_path << '\n';
    return kExitFailure;
  }
  const auto parsed = read_log(in);
  for (const auto& e : parsed.errors) err << log_path.string() << ": " << e << '\n';
  out << frontier_csv(pareto_frontier(parsed.records));
  return parsed.errors.empty() ? kExitOk : kExitFailure;
}

int cmd_estimate(const GenomeArgs& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  Genome genome;
  try {
    cfg = config_from(args.config);
    cfg.validate();
    genome = genome_from(args, /*need_layers=*/true);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const auto violations = validate(genome, cfg.effective_space());
  if (!violations.empty()) {
    for (const auto& v : violations) err << "invalid genome: " << v.locus << ": " << v.message << '\n';
    return kExitUsage;
  }

  const auto spec = realize(genome, cfg.dsp, cfg.estimator);
  const auto model_bytes = estimate_model_size_bytes(genome, cfg.dsp, cfg.estimator);
  const auto buffer = dsp::buffer_size_bytes(cfg.dsp.sample_bits, genome.data.sample_rate_hz, cfg.dsp.window_s);
  out << "genome: " << canonical_encode(genome) << '\n'
      << "feature_shape: " << shape_text(spec.input_shape) << '\n';
  for (std::size_t i = 0; i < spec.conv_layers.size(); ++i) {
    const auto& c = spec.conv_layers[i];
    out << "conv" << i + 1 << ": " << shape_text(c.output_shape) << " kernel " << c.kernel_size << ' '
        << activation_name(c.activation) << '\n';
  }
  out << "parameters: " << spec.total_parameters << '\n'
      << "model_size_bytes: " << model_bytes << '\n'
      << "buffer_bytes: " << buffer << '\n'
      << "total_footprint_bytes: " << total_footprint_bytes(genome, cfg.dsp, cfg.estimator) << '\n';
  return kExitOk;
}

int cmd_features(const std::filesystem::path& wav_path, const GenomeArgs& args,
                 const std::optional<std::filesystem::path>& csv_path, std::ostream& out,
                 std::ostream& err) {
  RunConfig cfg;
  Genome genome;
  try {
    cfg = config_from(args.config);
    cfg.validate();
    genome = genome_from(args, /*need_layers=*/false);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (genome.data.sample_rate_hz <= 0) {
    err << "error: sample rate must be positive\n";
    return kExitUsage;
  }

  dsp::FeatureTensor tensor;
  try {
    const auto audio = dsp::read_wav(wav_path);
    tensor = dsp::extract_features(audio.samples, audio.rate_hz, genome.data, cfg.dsp);
  } catch (const dsp::WavError& e) {
    err << "WAV error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const std::string csv = tensor_csv(tensor);
  if (csv_path) {
    if (!write_file(*csv_path, csv)) {
      err << "I/O error: cannot write " << *csv_path << '\n';
      return kExitFailure;
    }
    out << "wrote " << tensor.values.rows << "x" << tensor.values.cols << " features to "
        << csv_path->string() << '\n';
  } else {
    out << csv;
  }
  return kExitOk;
}

int cmd_default_config(std::ostream& out) {
  out << to_json(RunConfig{}).dump(2) << '\n';
  return kExitOk;
}

std::string tensor_csv(const dsp::FeatureTensor& tensor) {
  std::ostringstream out;
  char buf[32];
  const auto& m = tensor.values;
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.9g", m(r, c));
      if (c > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace danas::cli
