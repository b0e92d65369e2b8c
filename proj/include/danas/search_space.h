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

#ifndef DANAS_SEARCH_SPACE_H_
#define DANAS_SEARCH_SPACE_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "danas/random.h"

namespace danas {

enum class Preprocessing { kSpectrogram, kMelSpectrogram, kMfcc };
enum class Activation { kRelu, kSigmoid };

// Short codes used in keys, CSV and the wire protocol.
std::string_view preprocessing_code(Preprocessing pt);  // "SP" | "MS" | "MFCC"
std::optional<Preprocessing> parse_preprocessing(std::string_view code);
std::string_view activation_name(Activation af);  // "RELU" | "SIGMOID"
std::string_view activation_code(Activation af);  // "R" | "S"
// Accepts the long and short spellings.
std::optional<Activation> parse_activation(std::string_view text);

struct DataGenome {
  int sample_rate_hz = 0;
  Preprocessing preprocessing = Preprocessing::kSpectrogram;

  friend bool operator==(const DataGenome&, const DataGenome&) = default;
};

struct LayerGene {
  int filters = 0;
  int kernel_size = 0;
  Activation activation = Activation::kRelu;

  friend bool operator==(const LayerGene&, const LayerGene&) = default;
};

struct Genome {
  DataGenome data;
  std::vector<LayerGene> layers;

  friend bool operator==(const Genome&, const Genome&) = default;
};

// Allowed value sets per gene. Ordinal sets are strictly increasing;
// categorical sets keep their listed order (the first entry is the
// "trivial" value).
struct SearchSpace {
  std::vector<int> sample_rates{375, 750, 1500, 3000, 6000, 12000, 24000, 48000};
  std::vector<Preprocessing> preprocessing_types{
      Preprocessing::kSpectrogram, Preprocessing::kMelSpectrogram, Preprocessing::kMfcc};
  int layers_min = 1;
  int layers_max = 5;
  std::vector<int> filters{2, 4, 8, 16, 32, 64, 128};
  std::vector<int> kernel_sizes{3, 5};
  std::vector<Activation> activations{Activation::kRelu, Activation::kSigmoid};

  // Problems with the space itself; empty when well formed.
  std::vector<std::string> check() const;

  // Copy with the data genes pinned ("Fixed Data" mode).
  SearchSpace with_fixed_data(const DataGenome& data) const;
  // Copy with one filter count removed.
  SearchSpace excluding_filters(int count) const;
};

class InvalidSearchSpace : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws InvalidSearchSpace listing every problem reported by check().
void require_well_formed(const SearchSpace& space);

struct Violation {
  std::string locus;    // e.g. "SR", "L", "F2"
  std::string message;  // e.g. "sample_rate not in set"
};

// Empty result means the genome is valid under the space.
std::vector<Violation> validate(const Genome& genome, const SearchSpace& space);
inline bool is_valid(const Genome& genome, const SearchSpace& space) {
  return validate(genome, space).empty();
}

// SR:<hz>|PT:<SP|MS|MFCC>|L:<n> followed by |F:<f>,FS:<k>,AF:<R|S> per layer.
std::string canonical_encode(const Genome& genome);

class GenomeParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inverse of canonical_encode. Throws GenomeParseError on malformed keys.
// The result is structurally well formed but not checked against a space.
Genome decode_genome(std::string_view key);

LayerGene trivial_layer(const SearchSpace& space);
Genome trivial_genome(const SearchSpace& space);
Genome random_genome(const SearchSpace& space, Rng& rng);

}  // namespace danas

#endif  // DANAS_SEARCH_SPACE_H_
