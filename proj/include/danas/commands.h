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

#ifndef DANAS_COMMANDS_H_
#define DANAS_COMMANDS_H_

// Subcommand bodies, separated from argument parsing so tests can drive
// them with in-memory streams. Each returns a process exit status.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "danas/dsp.h"
#include "danas/search_space.h"

namespace danas::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // runtime, I/O, worker or data errors
inline constexpr int kExitUsage = 2;    // invalid configuration or arguments

struct SearchArgs {
  std::optional<std::filesystem::path> config;
  std::optional<uint64_t> seed;
  std::filesystem::path out;
  std::optional<std::string> evaluator;  // "synthetic" | "external"
  std::optional<std::string> worker_cmd;
  std::optional<int> fixed_sr;
  std::optional<std::string> fixed_pt;
};

// Genome given either as a canonical key or as separate genes.
struct GenomeArgs {
  std::optional<std::string> key;
  std::optional<int> sample_rate_hz;
  std::optional<std::string> preprocessing;
  std::vector<std::string> layers;  // "filters,kernel,activation", e.g. "16,5,R"
  std::optional<std::filesystem::path> config;
};

// Writes <out> (log), <out>.pareto.csv, <out>.summary.json and
// <out>.config.json; prints the summary.
int cmd_search(const SearchArgs& args, std::ostream& out, std::ostream& err);

// Prints the frontier of a log as CSV. Malformed lines are reported on
// `err` with their line number and make the exit status non-zero, but the
// remaining lines still contribute.
int cmd_pareto(const std::filesystem::path& log_path, std::ostream& out, std::ostream& err);

int cmd_estimate(const GenomeArgs& args, std::ostream& out, std::ostream& err);

// Only the data genes of `args` are used; layers may be omitted.
int cmd_features(const std::filesystem::path& wav_path, const GenomeArgs& args,
                 const std::optional<std::filesystem::path>& csv_path, std::ostream& out,
                 std::ostream& err);

// Prints the default configuration with every key materialized.
int cmd_default_config(std::ostream& out);

std::string tensor_csv(const dsp::FeatureTensor& tensor);

}  // namespace danas::cli

#endif  // DANAS_COMMANDS_H_
