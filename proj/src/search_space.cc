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

#include "danas/search_space.h"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace danas {

namespace {

template <typename T>
bool contains(const std::vector<T>& set, const T& value) {
  return std::find(set.begin(), set.end(), value) != set.end();
}

bool strictly_increasing(const std::vector<int>& values) {
  return std::adjacent_find(values.begin(), values.end(),
                            [](int a, int b) { return a >= b; }) == values.end();
}

template <typename T>
bool has_duplicates(const std::vector<T>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (values[i] == values[j]) return true;
    }
  }
  return false;
}

template <typename T>
const T& pick(const std::vector<T>& set, Rng& rng) {
  return set[rng.uniform_index(set.size())];
}

// Cursor over a canonical key.
class KeyReader {
 public:
  explicit KeyReader(std::string_view text) : text_(text) {}

  void expect(std::string_view literal) {
    if (text_.substr(pos_, literal.size()) != literal) {
      fail("expected '" + std::string(literal) + "'");
    }
    pos_ += literal.size();
  }

  int integer() {
    int value = 0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr == begin) fail("expected integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  std::string_view token() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '|' && text_[pos_] != ',') ++pos_;
    return text_.substr(start, pos_ - start);
  }

  bool at_end() const { return pos_ == text_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw GenomeParseError("malformed genome key '" + std::string(text_) + "' at offset " +
                           std::to_string(pos_) + ": " + what);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view preprocessing_code(Preprocessing pt) {
  switch (pt) {
    case Preprocessing::kSpectrogram:
      return "SP";
    case Preprocessing::kMelSpectrogram:
      return "MS";
    case Preprocessing::kMfcc:
      return "MFCC";
  }
  return "?";
}

std::optional<Preprocessing> parse_preprocessing(std::string_view code) {
  if (code == "SP") return Preprocessing::kSpectrogram;
  if (code == "MS") return Preprocessing::kMelSpectrogram;
  if (code == "MFCC") return Preprocessing::kMfcc;
  return std::nullopt;
}

std::string_view activation_name(Activation af) {
  return af == Activation::kRelu ? "RELU" : "SIGMOID";
}

std::string_view activation_code(Activation af) { return af == Activation::kRelu ? "R" : "S"; }

std::optional<Activation> parse_activation(std::string_view text) {
  if (text == "RELU" || text == "R") return Activation::kRelu;
  if (text == "SIGMOID" || text == "S") return Activation::kSigmoid;
  return std::nullopt;
}

std::vector<std::string> SearchSpace::check() const {
  std::vector<std::string> problems;
  auto ordinal = [&](const char* name, const std::vector<int>& values) {
    if (values.empty()) {
      problems.push_back(std::string(name) + ": must not be empty");
    } else if (!strictly_increasing(values)) {
      problems.push_back(std::string(name) + ": must be strictly increasing");
    } else if (values.front() <= 0) {
      problems.push_back(std::string(name) + ": values must be positive");
    }
  };
  ordinal("sample_rates", sample_rates);
  ordinal("filters", filters);
  ordinal("kernel_sizes", kernel_sizes);
  for (int k : kernel_sizes) {
    if (k % 2 == 0) {
      problems.push_back("kernel_sizes: " + std::to_string(k) + " is not odd");
      break;
    }
  }
  if (preprocessing_types.empty()) problems.push_back("preprocessing_types: must not be empty");
  if (has_duplicates(preprocessing_types)) problems.push_back("preprocessing_types: duplicate value");
  if (activations.empty()) problems.push_back("activations: must not be empty");
  if (has_duplicates(activations)) problems.push_back("activations: duplicate value");
  if (layers_min < 1) problems.push_back("layers_min: must be >= 1");
  if (layers_max < layers_min) problems.push_back("layers_max: must be >= layers_min");
  return problems;
}

SearchSpace SearchSpace::with_fixed_data(const DataGenome& data) const {
  SearchSpace pinned = *this;
  pinned.sample_rates = {data.sample_rate_hz};
  pinned.preprocessing_types = {data.preprocessing};
  return pinned;
}

SearchSpace SearchSpace::excluding_filters(int count) const {
  SearchSpace reduced = *this;
  std::erase(reduced.filters, count);
  return reduced;
}

void require_well_formed(const SearchSpace& space) {
  const auto problems = space.check();
  if (problems.empty()) return;
  std::ostringstream msg;
  msg << "invalid search space:";
  for (const auto& p : problems) msg << ' ' << p << ';';
  throw InvalidSearchSpace(msg.str());
}

std::vector<Violation> validate(const Genome& genome, const SearchSpace& space) {
  std::vector<Violation> out;
  if (!contains(space.sample_rates, genome.data.sample_rate_hz)) {
    out.push_back({"SR", "sample_rate not in set"});
  }
  if (!contains(space.preprocessing_types, genome.data.preprocessing)) {
    out.push_back({"PT", "preprocessing not in set"});
  }
  const auto n = static_cast<int>(genome.layers.size());
  if (n < space.layers_min || n > space.layers_max) {
    out.push_back({"L", "layer count out of range"});
  }
  for (std::size_t i = 0; i < genome.layers.size(); ++i) {
    const auto& layer = genome.layers[i];
    const std::string idx = std::to_string(i + 1);
    if (!contains(space.filters, layer.filters)) {
      out.push_back({"F" + idx, "filters not in set"});
    }
    if (!contains(space.kernel_sizes, layer.kernel_size)) {
      out.push_back({"FS" + idx, "kernel_size not in set"});
    }
    if (!contains(space.activations, layer.activation)) {
      out.push_back({"AF" + idx, "activation not in set"});
    }
  }
  return out;
}

std::string canonical_encode(const Genome& genome) {
  std::string key;
  key.reserve(32 + 16 * genome.layers.size());
  key += "SR:";
  key += std::to_string(genome.data.sample_rate_hz);
  key += "|PT:";
  key += preprocessing_code(genome.data.preprocessing);
  key += "|L:";
  key += std::to_string(genome.layers.size());
  for (const auto& layer : genome.layers) {
    key += "|F:";
    key += std::to_string(layer.filters);
    key += ",FS:";
    key += std::to_string(layer.kernel_size);
    key += ",AF:";
    key += activation_code(layer.activation);
  }
  return key;
}

Genome decode_genome(std::string_view key) {
  KeyReader in(key);
  Genome genome;
  in.expect("SR:");
  genome.data.sample_rate_hz = in.integer();
  in.expect("|PT:");
  const auto pt = parse_preprocessing(in.token());
  if (!pt) in.fail("unknown preprocessing");
  genome.data.preprocessing = *pt;
  in.expect("|L:");
  const int n = in.integer();
  if (n < 0 || n > 1024) in.fail("layer count out of range");
  for (int i = 0; i < n; ++i) {
    LayerGene layer;
    in.expect("|F:");
    layer.filters = in.integer();
    in.expect(",FS:");
    layer.kernel_size = in.integer();
    in.expect(",AF:");
    const auto token = in.token();
    if (token != "R" && token != "S") in.fail("unknown activation");
    layer.activation = *parse_activation(token);
    genome.layers.push_back(layer);
  }
  if (!in.at_end()) in.fail("trailing characters");
  return genome;
}

LayerGene trivial_layer(const SearchSpace& space) {
  return {space.filters.front(), space.kernel_sizes.front(), space.activations.front()};
}

Genome trivial_genome(const SearchSpace& space) {
  Genome genome;
  genome.data = {space.sample_rates.front(), space.preprocessing_types.front()};
  genome.layers.assign(static_cast<std::size_t>(space.layers_min), trivial_layer(space));
  return genome;
}

Genome random_genome(const SearchSpace& space, Rng& rng) {
  Genome genome;
  genome.data.sample_rate_hz = pick(space.sample_rates, rng);
  genome.data.preprocessing = pick(space.preprocessing_types, rng);
  const int n = rng.uniform_int(space.layers_min, space.layers_max);
  genome.layers.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LayerGene layer;
    layer.filters = pick(space.filters, rng);
    layer.kernel_size = pick(space.kernel_sizes, rng);
    layer.activation = pick(space.activations, rng);
    genome.layers.push_back(layer);
  }
  return genome;
}

}  // namespace danas
