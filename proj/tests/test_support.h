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

#ifndef DANAS_TESTS_TEST_SUPPORT_H_
#define DANAS_TESTS_TEST_SUPPORT_H_

#include <functional>
#include <vector>

#include "danas/search_space.h"

namespace danas::testing {

inline Genome make_genome(int sr, Preprocessing pt, std::vector<LayerGene> layers) {
  Genome g;
  g.data = {sr, pt};
  g.layers = std::move(layers);
  return g;
}

inline constexpr Activation R = Activation::kRelu;
inline constexpr Activation S = Activation::kSigmoid;
inline constexpr Preprocessing SP = Preprocessing::kSpectrogram;
inline constexpr Preprocessing MS = Preprocessing::kMelSpectrogram;
inline constexpr Preprocessing MFCC = Preprocessing::kMfcc;

// Calls `visit` for every valid genome of a (small) space.
inline void for_each_genome(const SearchSpace& space, const std::function<void(const Genome&)>& visit) {
  std::vector<LayerGene> choices;
  for (int f : space.filters) {
    for (int k : space.kernel_sizes) {
      for (Activation a : space.activations) choices.push_back({f, k, a});
    }
  }
  for (int sr : space.sample_rates) {
    for (Preprocessing pt : space.preprocessing_types) {
      for (int n = space.layers_min; n <= space.layers_max; ++n) {
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        for (;;) {
          Genome g;
          g.data = {sr, pt};
          for (std::size_t i : idx) g.layers.push_back(choices[i]);
          visit(g);
          std::size_t pos = 0;
          while (pos < idx.size() && ++idx[pos] == choices.size()) idx[pos++] = 0;
          if (pos == idx.size()) break;
        }
      }
    }
  }
}

}  // namespace danas::testing

#endif  // DANAS_TESTS_TEST_SUPPORT_H_
