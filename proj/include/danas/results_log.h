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

#ifndef DANAS_RESULTS_LOG_H_
#define DANAS_RESULTS_LOG_H_

#include <filesystem>
#include <fstream>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "danas/objectives.h"
#include "json.hpp"

namespace danas {

// One JSON object per line:
// {"fitness":..,"generation":..,"genome":{..},"key":"..","metrics":{..},
//  "seq":..,"source":"..","timestamp":".."}
nlohmann::json record_to_json(const EvaluationRecord& rec);
// Throws protocol::ProtocolError on a malformed record.
EvaluationRecord record_from_json(const nlohmann::json& j);
std::string encode_log_line(const EvaluationRecord& rec);

// Append-only writer; every record is flushed as it is written.
class LogWriter {
 public:
  // Truncates an existing file.
  explicit LogWriter(const std::filesystem::path& path);
  void append(const EvaluationRecord& rec);
  bool ok() const { return static_cast<bool>(out_); }

 private:
  std::ofstream out_;
};

struct LogReadResult {
  std::vector<EvaluationRecord> records;
  std::vector<std::string> errors;  // "line N: reason"
};

// Blank lines are skipped; malformed lines are reported and skipped.
LogReadResult read_log(std::istream& in);

// SR,PT,F1,FS1,AF1,...,Acc,Pre,Rec,MS with at least five layer groups
// and empty cells for absent layers.
std::string frontier_csv(std::span<const EvaluationRecord> frontier);

}  // namespace danas

#endif  // DANAS_RESULTS_LOG_H_
