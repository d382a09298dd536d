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
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "slip/features.hpp"
#include "slip/matrix.hpp"
#include "slip/trace.hpp"

namespace slip {

struct FeatureRow {
  CaseLabel label = CaseLabel::NormalTouchKeep;
  std::uint32_t sample_id = 0;
  FeatureVector values{};

  bool operator==(const FeatureRow&) const = default;
};

// Rows grouped by case in label order; (case, sample_id) unique. Column names
// are always feature_names().
struct FeatureMatrix {
  std::vector<FeatureRow> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t total_values() const { return rows.size() * kNumFeatures; }
  std::size_t count(CaseLabel label) const;

  bool operator==(const FeatureMatrix&) const = default;
};

/// One row per trace, sorted by (case, sample_id).
/// Throws Error{DuplicateSample} if two traces share (case, sample_id).
FeatureMatrix build_database(std::span<const SensorTrace> traces);

// Per-column z-score parameters. Columns whose fitted std is zero are stored
// with scale = 1, flagged, and pass through unchanged.
struct StandardizationParams {
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<bool> flagged;

  std::size_t width() const { return mean.size(); }
  static StandardizationParams identity(std::size_t width);

  // Throws Error{ShapeMismatch} on a width mismatch.
  std::vector<double> apply(std::span<const double> x) const;
  void apply_in_place(std::span<double> x) const;

  bool operator==(const StandardizationParams&) const = default;
};

/// Fits mean/std (population) on the columns of `rows` restricted to `fit_rows`.
/// Throws Error{EmptyFitSet}.
StandardizationParams fit_standardization(const Matrix& rows,
                                          std::span<const std::size_t> fit_rows);

// Feature values of the rows at `indices`, in that order.
Matrix to_matrix(const FeatureMatrix& matrix, std::span<const std::size_t> indices);

struct StandardizeResult {
  FeatureMatrix matrix;
  StandardizationParams params;
};

StandardizeResult standardize(const FeatureMatrix& matrix, std::span<const std::size_t> fit_rows);

double pearson(std::span<const double> a, std::span<const double> b);

struct CorrelationReport {
  double intra_case_mean = 0.0;
  double inter_case_mean = 0.0;
  std::size_t intra_pairs = 0;
  std::size_t inter_pairs = 0;
  // pair_mean[i][j]: mean correlation between rows of case i and case j
  // (distinct rows only on the diagonal); NaN where no pair exists.
  std::array<std::array<double, kNumCases>, kNumCases> pair_mean{};
  std::size_t degenerate_rows = 0;
};

/// Pearson correlation between every pair of row vectors. Rows with zero
/// variance are excluded and counted. Requires >= 2 rows for every case that
/// appears (Error{InsufficientClassRows}).
CorrelationReport validate_correlation(const FeatureMatrix& standardized);

std::string format_correlation_text(const CorrelationReport& report);
std::string format_correlation_csv(const CorrelationReport& report);

// CSV: header `case,sample_id,<54 feature names>`, 17 significant digits.
void write_matrix(std::ostream& out, const FeatureMatrix& matrix);
std::string format_matrix(const FeatureMatrix& matrix);

/// Throws Error{SchemaMismatch} (with row number) or Error{DuplicateSample}.
FeatureMatrix read_matrix(std::istream& in);

void save_matrix(const FeatureMatrix& matrix, const std::filesystem::path& destination);
FeatureMatrix load_matrix(const std::filesystem::path& source);

}  // namespace slip
