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

#include "slip/featuredb.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "slip/error.hpp"
#include "slip/textio.hpp"

namespace slip {

namespace {

bool row_less(const FeatureRow& a, const FeatureRow& b) {
  if (a.label != b.label) return a.label < b.label;
  return a.sample_id < b.sample_id;
}

void sort_and_check_unique(std::vector<FeatureRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), row_less);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].label == rows[i - 1].label && rows[i].sample_id == rows[i - 1].sample_id) {
      throw Error(ErrorCode::DuplicateSample,
                  std::string("duplicate sample ") + case_letter(rows[i].label) + "_" +
                      std::to_string(rows[i].sample_id));
    }
  }
}

std::string header_line() {
  std::string h = "case,sample_id";
  for (const auto& name : feature_names()) {
    h += ',';
    h += name;
  }
  return h;
}

}  // namespace

std::size_t FeatureMatrix::count(CaseLabel label) const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [label](const FeatureRow& r) { return r.label == label; }));
}

FeatureMatrix build_database(std::span<const SensorTrace> traces) {
  if (traces.empty()) throw Error(ErrorCode::InvalidArgument, "no traces to build a database from");
  FeatureMatrix m;
  m.rows.reserve(traces.size());
  for (const auto& t : traces) {
    m.rows.push_back(FeatureRow{t.label, t.sample_id, extract_sample_features(t)});
  }
  sort_and_check_unique(m.rows);
  return m;
}

StandardizationParams StandardizationParams::identity(std::size_t width) {
  return {std::vector<double>(width, 0.0), std::vector<double>(width, 1.0),
          std::vector<bool>(width, false)};
}

std::vector<double> StandardizationParams::apply(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  apply_in_place(out);
  return out;
}

void StandardizationParams::apply_in_place(std::span<double> x) const {
  if (x.size() != width()) {
    throw Error(ErrorCode::ShapeMismatch, "standardization expects " + std::to_string(width()) +
                                              " values, got " + std::to_string(x.size()));
  }
  for (std::size_t c = 0; c < x.size(); ++c) {
    if (!flagged[c]) x[c] = (x[c] - mean[c]) / scale[c];
  }
}

StandardizationParams fit_standardization(const Matrix& rows,
                                          std::span<const std::size_t> fit_rows) {
  if (fit_rows.empty()) throw Error(ErrorCode::EmptyFitSet, "standardization fit set is empty");
  const std::size_t width = rows.cols();
  StandardizationParams p = StandardizationParams::identity(width);
  const double n = static_cast<double>(fit_rows.size());
  for (std::size_t c = 0; c < width; ++c) {
    double sum = 0.0;
    for (std::size_t r : fit_rows) sum += rows(r, c);
    const double m = sum / n;
    double ss = 0.0;
    for (std::size_t r : fit_rows) {
      const double d = rows(r, c) - m;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    p.mean[c] = m;
    if (sd > 0.0) {
      p.scale[c] = sd;
    } else {
      p.flagged[c] = true;
    }
  }
  return p;
}

Matrix to_matrix(const FeatureMatrix& matrix, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), kNumFeatures);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& v = matrix.rows.at(indices[i]).values;
    std::copy(v.begin(), v.end(), out.row(i).begin());
  }
  return out;
}

StandardizeResult standardize(const FeatureMatrix& matrix, std::span<const std::size_t> fit_rows) {
  if (fit_rows.empty()) throw Error(ErrorCode::EmptyFitSet, "standardization fit set is empty");
  std::vector<std::size_t> all(matrix.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (std::size_t r : fit_rows) {
    if (r >= matrix.size()) throw Error(ErrorCode::InvalidArgument, "fit row out of range");
  }
  const Matrix values = to_matrix(matrix, all);
  StandardizeResult result{matrix, fit_standardization(values, fit_rows)};
  for (auto& row : result.matrix.rows) result.params.apply_in_place(row.values);
  return result;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::ShapeMismatch, "pearson needs equal non-empty lengths");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationReport validate_correlation(const FeatureMatrix& m) {
  for (CaseLabel label : kAllCases) {
    const std::size_t n = m.count(label);
    if (n == 1) {
      throw Error(ErrorCode::InsufficientClassRows,
                  std::string("case ") + case_letter(label) + " has a single row");
    }
  }
  if (m.size() < 2) throw Error(ErrorCode::InsufficientClassRows, "need at least 2 rows");

  CorrelationReport report;
  std::vector<bool> degenerate(m.size(), false);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto& v = m.rows[i].values;
    degenerate[i] = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    if (degenerate[i]) ++report.degenerate_rows;
  }

  std::array<std::array<double, kNumCases>, kNumCases> sum{};
  std::array<std::array<std::size_t, kNumCases>, kNumCases> count{};
  double intra = 0.0;
  double inter = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (degenerate[i]) continue;
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (degenerate[j]) continue;
      const double r = pearson(m.rows[i].values, m.rows[j].values);
      const std::size_t ci = case_index(m.rows[i].label);
      const std::size_t cj = case_index(m.rows[j].label);
      sum[ci][cj] += r;
      ++count[ci][cj];
      if (ci != cj) {
        sum[cj][ci] += r;
        ++count[cj][ci];
        inter += r;
        ++report.inter_pairs;
      } else {
        intra += r;
        ++report.intra_pairs;
      }
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < kNumCases; ++i) {
    for (std::size_t j = 0; j < kNumCases; ++j) {
      report.pair_mean[i][j] = count[i][j] ? sum[i][j] / static_cast<double>(count[i][j]) : nan;
    }
  }
  report.intra_case_mean = report.intra_pairs ? intra / static_cast<double>(report.intra_pairs) : nan;
  report.inter_case_mean = report.inter_pairs ? inter / static_cast<double>(report.inter_pairs) : nan;
  return report;
}

std::string format_correlation_text(const CorrelationReport& r) {
  std::ostringstream ss;
  ss << "Feature database correlation check (Pearson, standardized features)\n";
  ss << "intra-case mean correlation: " << format_double(r.intra_case_mean, 6) << " over "
     << r.intra_pairs << " pairs\n";
  ss << "inter-case mean correlation: " << format_double(r.inter_case_mean, 6) << " over "
     << r.inter_pairs << " pairs\n";
  ss << "degenerate rows excluded: " << r.degenerate_rows << "\n";
  ss << "verdict: "
     << (r.intra_case_mean > r.inter_case_mean ? "PASS (same-case samples correlate more)"
                                               : "FAIL (same-case samples do not correlate more)")
     << "\n\n";
  ss << "case-pair mean correlation\n     ";
  for (CaseLabel c : kAllCases) ss << "       " << case_letter(c) << "  ";
  ss << '\n';
  for (std::size_t i = 0; i < kNumCases; ++i) {
    ss << "  " << case_letter(kAllCases[i]) << "  ";
    for (std::size_t j = 0; j < kNumCases; ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " %9.4f ", r.pair_mean[i][j]);
      ss << buf;
    }
    ss << '\n';
  }
  return ss.str();
}

std::string format_correlation_csv(const CorrelationReport& r) {
  std::string out = "case";
  for (CaseLabel c : kAllCases) {
    out += ',';
    out += case_letter(c);
  }
  out += '\n';
  for (std::size_t i = 0; i < kNumCases; ++i) {
    out += case_letter(kAllCases[i]);
    for (std::size_t j = 0; j < kNumCases; ++j) {
      out += ',';
      out += std::isnan(r.pair_mean[i][j]) ? std::string("nan") : format_double(r.pair_mean[i][j], 17);
    }
    out += '\n';
  }
  return out;
}

void write_matrix(std::ostream& out, const FeatureMatrix& matrix) {
  out << header_line() << '\n';
  for (const auto& row : matrix.rows) {
    out << case_letter(row.label) << ',' << row.sample_id;
    for (double v : row.values) out << ',' << format_double(v, 17);
    out << '\n';
  }
}

std::string format_matrix(const FeatureMatrix& matrix) {
  std::ostringstream ss;
  write_matrix(ss, matrix);
  return ss.str();
}

FeatureMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, "empty feature file", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header_line()) {
    const std::size_t cols = split_fields(line).size();
    throw Error(ErrorCode::SchemaMismatch,
                "row 1: header does not match case,sample_id,<" + std::to_string(kNumFeatures) +
                    " feature names> (got " + std::to_string(cols) + " columns)",
                1);
  }
  FeatureMatrix m;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    const std::string where = "row " + std::to_string(line_no) + ": ";
    if (fields.size() != 2 + kNumFeatures) {
      throw Error(ErrorCode::SchemaMismatch,
                  where + "expected " + std::to_string(2 + kNumFeatures) + " columns, got " +
                      std::to_string(fields.size()),
                  line_no);
    }
    FeatureRow row;
    auto label = fields[0].size() == 1 ? case_from_letter(fields[0][0]) : std::nullopt;
    if (!label) {
      throw Error(ErrorCode::SchemaMismatch, where + "unknown case '" + std::string(fields[0]) + "'",
                  line_no);
    }
    row.label = *label;
    auto id = parse_u64(fields[1]);
    if (!id || *id > 0xFFFFFFFFu) {
      throw Error(ErrorCode::SchemaMismatch, where + "bad sample_id '" + std::string(fields[1]) + "'",
                  line_no);
    }
    row.sample_id = static_cast<std::uint32_t>(*id);
    for (std::size_t c = 0; c < kNumFeatures; ++c) {
      auto v = parse_double(fields[2 + c]);
      if (!v) {
        throw Error(ErrorCode::SchemaMismatch,
                    where + "bad value in column " + feature_names()[c], line_no);
      }
      row.values[c] = *v;
    }
    m.rows.push_back(row);
  }
  sort_and_check_unique(m.rows);
  return m;
}

void save_matrix(const FeatureMatrix& matrix, const std::filesystem::path& destination) {
  write_file_atomic(destination, format_matrix(matrix));
}

FeatureMatrix load_matrix(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + source.string());
  return read_matrix(in);
}

}  // namespace slip
