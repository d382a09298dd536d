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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace slip {

struct IndexSplit {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

/// Per-class seeded shuffle; round(train_fraction * class_count) rows of each
/// class go to `train`, clamped to [1, count - 1] for classes with >= 2 rows.
/// A single-row class goes entirely to `train`. Each class is shuffled by a
/// fresh RNG seeded with `seed`, so the k-th rows of equal-size classes always
/// land on the same side.
IndexSplit stratified_indices(std::span<const int> labels, double train_fraction,
                              std::uint64_t seed);

}  // namespace slip
