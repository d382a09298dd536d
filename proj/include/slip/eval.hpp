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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slip/featuredb.hpp"
#include "slip/nnets.hpp"

namespace slip {

struct CasePair {
  CaseLabel first;
  CaseLabel second;

  bool operator==(const CasePair&) const = default;
};

inline constexpr std::size_t kNumPairs = 15;
inline constexpr std::size_t kNumKinds = 4;

// AB, AC, AD, AE, AF, BC, ..., EF.
const std::array<CasePair, kNumPairs>& all_pairs();
std::string pair_name(CasePair pair);

struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
};

/// Per-case seeded 70/30 (or `train_fraction`) split of the matrix rows.
/// Throws Error{InsufficientClassRows} if a present case has fewer than 2 rows.
SplitPlan stratified_split(const FeatureMatrix& matrix, double train_fraction, std::uint64_t seed);

struct PairResult {
  double accuracy_percent = 0.0;
  std::size_t correct = 0;
  std::size_t test_count = 0;
  std::uint64_t seed = 0;
};

/// Restricts to the pair's rows, splits, fits standardization on the training
/// rows, trains `kind` and scores the held-out rows. The split and the
/// network initialization seeds are derived from `seed`.
PairResult evaluate_pair(const FeatureMatrix& matrix, CasePair pair, NetworkKind kind,
                         const TrainConfig& cfg, const GaConfig& ga, std::uint64_t seed,
                         double train_fraction = 0.7);

using TableEntries = std::array<std::array<double, kNumKinds>, kNumPairs>;

// Rows in all_pairs() order, columns in kAllKinds order. Averages cover the
// evaluated columns only; unevaluated entries are NaN.
struct PerformanceTable {
  TableEntries accuracy{};
  std::array<bool, kNumKinds> evaluated{};
  std::array<double, kNumPairs> row_average{};
  std::array<double, kNumKinds> column_average{};
  double grand_average = 0.0;
  // Per-entry run records (one per repeat); empty for injected tables.
  std::array<std::array<std::vector<PairResult>, kNumKinds>, kNumPairs> runs{};
  std::uint64_t master_seed = 0;
  double train_fraction = 0.7;

  bool any_evaluated() const;
};

/// Builds a table from entries and computes every average.
PerformanceTable summarize(const TableEntries& entries,
                           std::array<bool, kNumKinds> evaluated = {true, true, true, true});

struct EvalOptions {
  std::vector<NetworkKind> kinds{kAllKinds.begin(), kAllKinds.end()};
  double train_fraction = 0.7;
  std::size_t threads = 0;     // 0: hardware concurrency; 1: serial
  std::size_t repeats = 1;     // >1 averages independently seeded runs per entry
};

/// Evaluates every (pair, kind) task with seeds derived from master_seed. The
/// result does not depend on `options.threads`.
PerformanceTable run_full_matrix(const FeatureMatrix& matrix, const TrainConfig& cfg,
                                 const GaConfig& ga, std::uint64_t master_seed,
                                 const EvalOptions& options = {});

/// Evaluated kinds by descending column average; ties keep column order.
std::vector<NetworkKind> rank_networks(const PerformanceTable& table);

std::string format_report_markdown(const PerformanceTable& table);
std::string format_report_csv(const PerformanceTable& table);
std::string format_seed_manifest(const PerformanceTable& table);

/// Reads a table back from format_report_csv output (for plotting).
PerformanceTable parse_report_csv(std::string_view text);

}  // namespace slip
