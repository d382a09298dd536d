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


#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "slip/featuredb.hpp"
#include "slip/synthgen.hpp"
#include "slip/textio.hpp"
#include "support.hpp"

using namespace slip;
using testing::error_code;
using testing::error_line;

namespace {

const FeatureMatrix& default_db() {
  static const FeatureMatrix db = [] {
    const auto traces = generate_dataset(20, 42, MotionModelParams{});
    return build_database(traces);
  }();
  return db;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

FeatureRow row_of(CaseLabel c, std::uint32_t id, double fill) {
  FeatureRow r;
  r.label = c;
  r.sample_id = id;
  r.values.fill(fill);
  return r;
}

}  // namespace

TEST_CASE("build_database") {
  const FeatureMatrix& db = default_db();
  CHECK(db.size() == 120);
  CHECK(db.total_values() == 6480);
  for (CaseLabel c : kAllCases) CHECK(db.count(c) == 20);
  for (std::size_t i = 1; i < db.size(); ++i) {
    const auto& a = db.rows[i - 1];
    const auto& b = db.rows[i];
    CHECK((a.label < b.label || (a.label == b.label && a.sample_id < b.sample_id)));
  }

  auto traces = generate_dataset(2, 5, MotionModelParams{});
  std::reverse(traces.begin(), traces.end());
  const FeatureMatrix sorted = build_database(traces);
  CHECK(sorted.rows.front().label == CaseLabel::NormalTouchKeep);
  CHECK(sorted.rows.front().sample_id == 0);
  CHECK(sorted.rows.front().values == extract_sample_features(traces.back()));

  CHECK(build_database(std::vector<SensorTrace>{traces[0]}).total_values() == 54);
  traces.push_back(traces[3]);
  CHECK(error_code([&] { build_database(traces); }) == ErrorCode::DuplicateSample);
}

TEST_CASE("standardize") {
  SUBCASE("two values become -1 and +1; constant columns are flagged") {
    FeatureMatrix m;
    m.rows = {row_of(CaseLabel::NormalTouchKeep, 0, 5.0), row_of(CaseLabel::Fall, 0, 5.0)};
    m.rows[0].values[0] = 1.0;
    m.rows[1].values[0] = 3.0;
    const auto [z, params] = standardize(m, iota(2));
    CHECK(z.rows[0].values[0] == -1.0);
    CHECK(z.rows[1].values[0] == 1.0);
    CHECK(z.rows[0].values[1] == 5.0);
    CHECK(params.flagged[1]);
    CHECK_FALSE(params.flagged[0]);
    CHECK(params.scale[1] == 1.0);
  }
  SUBCASE("fit-set moments after the transform") {
    const FeatureMatrix& db = default_db();
    std::vector<std::size_t> fit;
    for (std::size_t i = 0; i < db.size(); i += 3) fit.push_back(i);
    const auto [z, params] = standardize(db, fit);
    for (std::size_t c = 0; c < kNumFeatures; ++c) {
      if (params.flagged[c]) continue;
      std::vector<double> col;
      for (std::size_t r : fit) col.push_back(z.rows[r].values[c]);
      CHECK(std::abs(oracle::mean(col)) < 1e-12);
      CHECK(std::abs(std::sqrt(oracle::variance(col)) - 1.0) < 1e-12);
    }
    // Rows outside the fit set use the same parameters.
    CHECK(z.rows[1].values == [&] {
      FeatureVector v = db.rows[1].values;
      params.apply_in_place(v);
      return v;
    }());
  }
  SUBCASE("errors") {
    CHECK(error_code([] { standardize(default_db(), std::vector<std::size_t>{}); }) ==
          ErrorCode::EmptyFitSet);
    const auto params = StandardizationParams::identity(3);
    CHECK(error_code([&] { params.apply(std::vector<double>(4, 0.0)); }) == ErrorCode::ShapeMismatch);
  }
}

TEST_CASE("pearson") {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = oracle::random_series(rng, 54);
    const auto b = oracle::random_series(rng, 54);
    const double r = pearson(a, b);
    CHECK(r == pearson(b, a));
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(pearson(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    // Uniform affine rescaling with positive slope leaves it unchanged.
    std::vector<double> a2(a), b2(b);
    for (auto& v : a2) v = 3.0 * v - 7.0;
    for (auto& v : b2) v = 3.0 * v - 7.0;
    CHECK(std::abs(pearson(a2, b2) - r) < 1e-12);
  }
  // Standardized orthogonal vectors.
  const std::vector<double> u = {1, -1, 1, -1};
  const std::vector<double> v = {1, 1, -1, -1};
  CHECK(std::abs(pearson(u, v)) < 1e-12);
  CHECK(std::isnan(pearson(std::vector<double>(4, 2.0), u)));
}

TEST_CASE("validate_correlation") {
  SUBCASE("identical rows within each case") {
    FeatureMatrix m;
    std::mt19937_64 rng(2);
    for (CaseLabel c : kAllCases) {
      const auto base = oracle::random_series(rng, kNumFeatures);
      for (std::uint32_t id = 0; id < 4; ++id) {
        FeatureRow r;
        r.label = c;
        r.sample_id = id;
        std::copy(base.begin(), base.end(), r.values.begin());
        m.rows.push_back(r);
      }
    }
    const CorrelationReport rep = validate_correlation(m);
    CHECK(rep.intra_case_mean == 1.0);
    CHECK(rep.inter_case_mean < 1.0);
    CHECK(rep.intra_pairs == 6 * 6);
    CHECK(rep.inter_pairs == 15 * 16);
    CHECK(rep.pair_mean[2][2] == 1.0);
    CHECK(rep.pair_mean[0][1] == rep.pair_mean[1][0]);
  }
  SUBCASE("default synthetic database") {
    const FeatureMatrix& db = default_db();
    const auto z = standardize(db, iota(db.size())).matrix;
    const CorrelationReport rep = validate_correlation(z);
    CHECK(rep.intra_case_mean > rep.inter_case_mean);
    CHECK(rep.intra_pairs == 6 * 190);
    CHECK(rep.inter_pairs == 15 * 400);
    CHECK(rep.degenerate_rows == 0);
    // Re-standardizing after any positive per-column affine map gives the same
    // report. Constant columns pass through standardization, so they stay put.
    const auto flagged = standardize(db, iota(db.size())).params.flagged;
    FeatureMatrix warped = db;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> slope(0.1, 10.0), shift(-100.0, 100.0);
    for (std::size_t c = 0; c < kNumFeatures; ++c) {
      const double a = slope(rng), b = shift(rng);
      if (flagged[c]) continue;
      for (auto& r : warped.rows) r.values[c] = a * r.values[c] + b;
    }
    const CorrelationReport again = validate_correlation(standardize(warped, iota(db.size())).matrix);
    CHECK(std::abs(again.intra_case_mean - rep.intra_case_mean) < 1e-9);
    CHECK(std::abs(again.inter_case_mean - rep.inter_case_mean) < 1e-9);
    const std::string text = format_correlation_text(rep);
    CHECK(text.find("intra-case") != std::string::npos);
    const std::string csv = format_correlation_csv(rep);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  }
  SUBCASE("degenerate rows are excluded and counted") {
    FeatureMatrix m;
    std::mt19937_64 rng(4);
    for (CaseLabel c : {CaseLabel::NormalTouchKeep, CaseLabel::Fall}) {
      for (std::uint32_t id = 0; id < 3; ++id) {
        FeatureRow r;
        r.label = c;
        r.sample_id = id;
        const auto v = oracle::random_series(rng, kNumFeatures);
        std::copy(v.begin(), v.end(), r.values.begin());
        m.rows.push_back(r);
      }
    }
    m.rows[1].values.fill(0.5);
    const CorrelationReport rep = validate_correlation(m);
    CHECK(rep.degenerate_rows == 1);
    CHECK(rep.intra_pairs == 1 + 3);
    CHECK(rep.inter_pairs == 2 * 3);
  }
  SUBCASE("a case with one row is rejected") {
    FeatureMatrix m;
    m.rows = {row_of(CaseLabel::NormalTouchKeep, 0, 1.0), row_of(CaseLabel::NormalTouchKeep, 1, 2.0),
              row_of(CaseLabel::Fall, 0, 3.0)};
    CHECK(error_code([&] { validate_correlation(m); }) == ErrorCode::InsufficientClassRows);
  }
}

TEST_CASE("matrix persistence") {
  const auto dir = testing::scratch_dir("featuredb");
  const FeatureMatrix& db = default_db();
  save_matrix(db, dir / "f.csv");
  CHECK(load_matrix(dir / "f.csv") == db);
  const std::string text = read_file(dir / "f.csv");
  CHECK(text.rfind("case,sample_id,accel_x_mean,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 121);

  const auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_matrix(in);
  };
  const std::string header = text.substr(0, text.find('\n') + 1);
  const std::string line1 = text.substr(header.size(), text.find('\n', header.size()) - header.size() + 1);

  SUBCASE("53 feature columns") {
    std::string short_header = header.substr(0, header.rfind(','));
    short_header += "\n";
    CHECK(error_code([&] { parse(short_header); }) == ErrorCode::SchemaMismatch);
    std::string short_row = line1.substr(0, line1.rfind(',')) + "\n";
    CHECK(error_code([&] { parse(header + short_row); }) == ErrorCode::SchemaMismatch);
    CHECK(error_line([&] { parse(header + short_row); }) == 2);
  }
  SUBCASE("unknown case letter") {
    const std::string bad = "G" + line1.substr(1);
    CHECK(error_code([&] { parse(header + line1 + bad); }) == ErrorCode::SchemaMismatch);
    CHECK(error_line([&] { parse(header + line1 + bad); }) == 3);
  }
  SUBCASE("unparsable value") {
    const std::string bad = line1.substr(0, line1.rfind(',')) + ",abc\n";
    CHECK(error_code([&] { parse(header + bad); }) == ErrorCode::SchemaMismatch);
  }
  SUBCASE("duplicate sample") {
    CHECK(error_code([&] { parse(header + line1 + line1); }) == ErrorCode::DuplicateSample);
  }
  SUBCASE("rows are regrouped by case on load") {
    const FeatureMatrix two = parse(header + "F" + line1.substr(1) + line1);
    CHECK(two.rows[0].label == CaseLabel::NormalTouchKeep);
    CHECK(two.rows[1].label == CaseLabel::Fall);
  }
  SUBCASE("missing file") {
    CHECK(error_code([&] { load_matrix(dir / "nope.csv"); }) == ErrorCode::IoFailure);
  }
  std::filesystem::remove_all(dir);
}
