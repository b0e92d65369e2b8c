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

#ifndef DANAS_CONFIG_ERROR_H_
#define DANAS_CONFIG_ERROR_H_

#include <stdexcept>
#include <string>

namespace danas {

// A configuration value that fails validation. `field` is the dotted path
// of the offending key (e.g. "ga.eval_budget").
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& reason)
      : std::invalid_argument(field + ": " + reason), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace danas

#endif  // DANAS_CONFIG_ERROR_H_
