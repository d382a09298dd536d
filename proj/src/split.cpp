// Copyright 2026 The slipdetect Authors
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

#include "slip/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "slip/error.hpp"

namespace slip {

IndexSplit stratified_indices(std::span<const int> labels, double train_fraction,
                              std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must be in (0, 1)");
  }
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  IndexSplit split;
  for (auto& [label, members] : by_class) {
    // Every class restarts from the same seed: equal-size classes share one
    // permutation of within-class positions.
    std::mt19937_64 rng(seed);
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t n = members.size();
    std::size_t n_train = n;
    if (n >= 2) {
      const auto rounded = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
      n_train = std::clamp<std::size_t>(rounded, 1, n - 1);
    }
    split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
    split.test.insert(split.test.end(), members.begin() + n_train, members.end());
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace slip
