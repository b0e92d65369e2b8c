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

// danas: data-aware architecture search from the command line.
//
//   danas search   --out run.jsonl [--config cfg.json] [--seed N] ...
//   danas pareto   run.jsonl
//   danas estimate --genome "SR:750|PT:MFCC|L:1|F:2,FS:5,AF:S"
//   danas features --wav clip.wav --sr 750 --pt MFCC [--out feats.csv]
//   danas config   (prints the default configuration)

#include <iostream>

#include "CLI11.hpp"
#include "danas/commands.h"

namespace {

void add_genome_options(CLI::App* cmd, danas::cli::GenomeArgs& g) {
  cmd->add_option("--genome", g.key, "Canonical genome key");
  cmd->add_option("--sr", g.sample_rate_hz, "Sample rate in Hz");
  cmd->add_option("--pt", g.preprocessing, "Preprocessing: SP, MS or MFCC");
  cmd->add_option("--layer", g.layers, "Conv layer FILTERS,KERNEL,ACTIVATION (repeatable)");
  cmd->add_option("--config", g.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = danas::cli;
  CLI::App app{"Data-aware neural architecture search"};
  app.require_subcommand(1);

  cli::SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Run a genetic search and write its log");
  search_cmd->add_option("--config", search.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  search_cmd->add_option("--seed", search.seed, "Random seed (overrides ga.seed)");
  search_cmd->add_option("--out", search.out, "Evaluation log path (JSON lines)")->required();
  search_cmd->add_option("--evaluator", search.evaluator, "synthetic | external")
      ->check(CLI::IsMember({"synthetic", "external"}));
  search_cmd->add_option("--worker-cmd", search.worker_cmd, "Trainer worker command line");
  search_cmd->add_option("--fixed-sr", search.fixed_sr, "Pin the sample rate (Hz)");
  search_cmd->add_option("--fixed-pt", search.fixed_pt, "Pin the preprocessing type")
      ->check(CLI::IsMember({"SP", "MS", "MFCC"}));

  std::string log_path;
  auto* pareto_cmd = app.add_subcommand("pareto", "Print the Pareto frontier of a log as CSV");
  pareto_cmd->add_option("log", log_path, "Evaluation log")->required();

  cli::GenomeArgs estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Print shapes, parameters and footprint of a genome");
  add_genome_options(estimate_cmd, estimate);

  cli::GenomeArgs features;
  std::string wav_path;
  std::optional<std::filesystem::path> csv_path;
  auto* features_cmd = app.add_subcommand("features", "Dump the feature tensor of a WAV file as CSV");
  features_cmd->add_option("--wav", wav_path, "Input WAV (PCM16)")->required();
  features_cmd->add_option("--out", csv_path, "Output CSV (default: stdout)");
  add_genome_options(features_cmd, features);

  auto* config_cmd = app.add_subcommand("config", "Print the default configuration");

  CLI11_PARSE(app, argc, argv);

  if (*search_cmd) return cli::cmd_search(search, std::cout, std::cerr);
  if (*pareto_cmd) return cli::cmd_pareto(log_path, std::cout, std::cerr);
  if (*estimate_cmd) return cli::cmd_estimate(estimate, std::cout, std::cerr);
  if (*features_cmd) return cli::cmd_features(wav_path, features, csv_path, std::cout, std::cerr);
  if (*config_cmd) return cli::cmd_default_config(std::cout);
  return cli::kExitUsage;
}
