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
#include <set>

#include "oracles.hpp"
#include "slip/eval.hpp"
#include "slip/synthgen.hpp"
#include "support.hpp"

using namespace slip;
using testing::error_code;

namespace {

const FeatureMatrix& default_db() {
  static const FeatureMatrix db = [] {
    const auto traces = generate_dataset(20, 42, MotionModelParams{});
    return build_database(traces);
  }();
  return db;
}

FeatureMatrix subset(const FeatureMatrix& m, CasePair pair) {
  FeatureMatrix out;
  for (const auto& r : m.rows) {
    if (r.label == pair.first || r.label == pair.second) out.rows.push_back(r);
  }
  return out;
}

TableEntries reference_entries() {
  TableEntries e{};
  for (std::size_t r = 0; r < kNumPairs; ++r) {
    for (std::size_t c = 0; c < kNumKinds; ++c) e[r][c] = oracle::kReference[r][c];
  }
  return e;
}

TrainConfig quick_cfg() {
  TrainConfig cfg;
  cfg.epochs = 60;
  return cfg;
}

GaConfig quick_ga() {
  GaConfig ga;
  ga.population = 3;
  ga.generations = 2;
  return ga;
}

void check_split_invariants(const SplitPlan& plan, std::size_t rows) {
  std::set<std::size_t> seen(plan.train.begin(), plan.train.end());
  for (std::size_t i : plan.test) CHECK(seen.insert(i).second);
  CHECK(seen.size() == rows);
  if (!seen.empty()) CHECK(*seen.rbegin() == rows - 1);
}

}  // namespace

TEST_CASE("case pairs") {
  const auto& pairs = all_pairs();
  const char* expected[] = {"AB", "AC", "AD", "AE", "AF", "BC", "BD", "BE",
                            "BF", "CD", "CE", "CF", "DE", "DF", "EF"};
  for (std::size_t i = 0; i < kNumPairs; ++i) {
    CHECK(pair_name(pairs[i]) == expected[i]);
    CHECK(pairs[i].first < pairs[i].second);
  }
}

TEST_CASE("stratified_split") {
  const FeatureMatrix& db = default_db();
  SUBCASE("full database") {
    const SplitPlan plan = stratified_split(db, 0.7, 1);
    CHECK(plan.train.size() == 84);
    CHECK(plan.test.size() == 36);
    CHECK(plan.train.size() * kNumFeatures == 4536);
    CHECK(plan.test.size() * kNumFeatures == 1944);
    for (CaseLabel c : kAllCases) {
      CHECK(std::count_if(plan.train.begin(), plan.train.end(),
                          [&](std::size_t i) { return db.rows[i].label == c; }) == 14);
    }
    check_split_invariants(plan, db.size());
    CHECK(plan.seed == 1);
  }
  SUBCASE("one pair") {
    const FeatureMatrix af = subset(db, {CaseLabel::NormalTouchKeep, CaseLabel::Fall});
    const SplitPlan plan = stratified_split(af, 0.7, 99);
    CHECK(plan.train.size() == 28);
    CHECK(plan.test.size() == 12);
    std::size_t test_a = 0;
    for (std::size_t i : plan.test) test_a += af.rows[i].label == CaseLabel::NormalTouchKeep;
    CHECK(test_a == 6);
    check_split_invariants(plan, af.size());
  }
  SUBCASE("two rows per class at one half") {
    FeatureMatrix tiny;
    for (CaseLabel c : {CaseLabel::AccidentalKeep, CaseLabel::Flip}) {
      for (std::uint32_t id = 0; id < 2; ++id) tiny.rows.push_back({c, id, {}});
    }
    const SplitPlan plan = stratified_split(tiny, 0.5, 3);
    CHECK(plan.train.size() == 2);
    CHECK(plan.test.size() == 2);
    CHECK(tiny.rows[plan.train[0]].label != tiny.rows[plan.train[1]].label);
  }
  SUBCASE("determinism and seed sensitivity") {
    CHECK(stratified_split(db, 0.7, 5).train == stratified_split(db, 0.7, 5).train);
    CHECK(stratified_split(db, 0.7, 5).test == stratified_split(db, 0.7, 5).test);
    CHECK_FALSE(stratified_split(db, 0.7, 5).test == stratified_split(db, 0.7, 6).test);
    for (std::uint64_t s = 0; s < 20; ++s) check_split_invariants(stratified_split(db, 0.3 + s * 0.02, s), db.size());
  }
  SUBCASE("errors") {
    FeatureMatrix lonely;
    lonely.rows = {{CaseLabel::NormalTouchKeep, 0, {}}, {CaseLabel::NormalTouchKeep, 1, {}},
                   {CaseLabel::Fall, 0, {}}};
    CHECK(error_code([&] { stratified_split(lonely, 0.7, 1); }) == ErrorCode::InsufficientClassRows);
    CHECK(error_code([&] { stratified_split(db, 1.0, 1); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([&] { stratified_split(db, 0.0, 1); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("evaluate_pair") {
  const FeatureMatrix& db = default_db();
  SUBCASE("accuracy is quantized by the 12 test rows") {
    for (NetworkKind k : kAllKinds) {
      const PairResult r = evaluate_pair(db, {CaseLabel::AccidentalKeep, CaseLabel::SlipTillTippingPoint},
                                         k, quick_cfg(), quick_ga(), 17);
      CHECK(r.test_count == 12);
      CHECK(r.accuracy_percent == 100.0 * static_cast<double>(r.correct) / 12.0);
      CHECK(r.seed == 17);
    }
  }
  SUBCASE("AF under PatternNet with defaults") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const PairResult r = evaluate_pair(db, {CaseLabel::NormalTouchKeep, CaseLabel::Fall},
                                         NetworkKind::PatternNet, TrainConfig{}, GaConfig{}, seed);
      CHECK(r.correct >= 10);
    }
  }
  SUBCASE("indistinguishable classes score near chance") {
    // B rows are exact copies of the A rows.
    FeatureMatrix twin;
    for (const auto& r : db.rows) {
      if (r.label != CaseLabel::NormalTouchKeep) continue;
      twin.rows.push_back(r);
      FeatureRow copy = r;
      copy.label = CaseLabel::AccidentalKeep;
      twin.rows.push_back(copy);
    }
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      total += evaluate_pair(twin, {CaseLabel::NormalTouchKeep, CaseLabel::AccidentalKeep},
                             NetworkKind::PatternNet, quick_cfg(), quick_ga(), seed)
                   .accuracy_percent;
    }
    CHECK(total / 10.0 >= 20.0);
    CHECK(total / 10.0 <= 80.0);
  }
  SUBCASE("a missing case is an error") {
    const FeatureMatrix only_a = subset(db, {CaseLabel::NormalTouchKeep, CaseLabel::NormalTouchKeep});
    CHECK(error_code([&] {
            evaluate_pair(only_a, {CaseLabel::NormalTouchKeep, CaseLabel::Fall}, NetworkKind::PatternNet,
                          quick_cfg(), quick_ga(), 1);
          }) == ErrorCode::InsufficientClassRows);
  }
}

TEST_CASE("summarize reproduces the reference averages") {
  const PerformanceTable t = summarize(reference_entries());
  for (std::size_t c = 0; c < kNumKinds; ++c) {
    CHECK(std::abs(t.column_average[c] - oracle::kReferenceColumnAverage[c]) <= 0.001);
  }
  for (std::size_t r = 0; r < kNumPairs; ++r) {
    CAPTURE(r);
    CHECK(std::abs(t.row_average[r] - oracle::kReferenceRowAverage[r]) <= 0.001);
  }
  CHECK(std::abs(t.grand_average - oracle::kReferenceGrandAverage) <= 0.001);
  CHECK(std::abs(t.row_average[0] - 56.247) <= 0.001);
  CHECK(std::abs(t.row_average[2] - 66.665) <= 0.001);
  CHECK(rank_networks(t) == std::vector<NetworkKind>{NetworkKind::PatternNet, NetworkKind::CascadeNet,
                                                     NetworkKind::Feedforward, NetworkKind::FitNet});
}

TEST_CASE("stored averages equal the mean of their entries") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> acc(0.0, 100.0);
  for (int rep = 0; rep < 20; ++rep) {
    TableEntries e{};
    for (auto& row : e) for (auto& v : row) v = acc(rng);
    const PerformanceTable t = summarize(e);
    double grand = 0.0;
    for (std::size_t r = 0; r < kNumPairs; ++r) {
      long double s = 0.0L;
      for (double v : e[r]) s += v;
      CHECK(std::abs(t.row_average[r] - static_cast<double>(s / 4)) < 1e-9);
      grand += static_cast<double>(s);
    }
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      long double s = 0.0L;
      for (std::size_t r = 0; r < kNumPairs; ++r) s += e[r][c];
      CHECK(std::abs(t.column_average[c] - static_cast<double>(s / 15)) < 1e-9);
    }
    CHECK(std::abs(t.grand_average - grand / 60.0) < 1e-9);
  }
  TableEntries bad = reference_entries();
  bad[3][1] = 100.5;
  CHECK(error_code([&] { summarize(bad); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("rank_networks") {
  TableEntries flat{};
  for (auto& row : flat) row.fill(50.0);
  CHECK(rank_networks(summarize(flat)) ==
        std::vector<NetworkKind>{NetworkKind::PatternNet, NetworkKind::Feedforward,
                                 NetworkKind::FitNet, NetworkKind::CascadeNet});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> acc(0.0, 50.0);
  for (int rep = 0; rep < 50; ++rep) {
    TableEntries e{};
    for (auto& row : e) for (auto& v : row) v = acc(rng);
    const std::size_t col = rng() % 4;
    const std::size_t row = rng() % 15;
    const auto before = rank_networks(summarize(e));
    e[row][col] += 50.0;
    const auto after = rank_networks(summarize(e));
    const auto pos = [&](const std::vector<NetworkKind>& v) {
      return std::find(v.begin(), v.end(), kAllKinds[col]) - v.begin();
    };
    CHECK(pos(after) <= pos(before));
  }
  const auto partial = summarize(flat, {false, true, false, true});
  CHECK(rank_networks(partial) == std::vector<NetworkKind>{NetworkKind::Feedforward, NetworkKind::CascadeNet});
  CHECK(std::isnan(partial.accuracy[0][0]));
}

TEST_CASE("run_full_matrix") {
  const FeatureMatrix& db = default_db();
  EvalOptions serial;
  serial.threads = 1;
  const PerformanceTable a = run_full_matrix(db, quick_cfg(), quick_ga(), 42, serial);
  for (std::size_t r = 0; r < kNumPairs; ++r) {
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      REQUIRE(a.runs[r][c].size() == 1);
      CHECK(a.runs[r][c][0].test_count == 12);
      const double k = a.accuracy[r][c] * 12.0 / 100.0;
      CHECK(std::abs(k - std::round(k)) < 1e-9);
    }
  }
  CHECK(a.master_seed == 42);

  EvalOptions parallel;
  parallel.threads = 4;
  const PerformanceTable b = run_full_matrix(db, quick_cfg(), quick_ga(), 42, parallel);
  CHECK(format_report_csv(a) == format_report_csv(b));
  CHECK(format_seed_manifest(a) == format_seed_manifest(b));

  SUBCASE("repeats and column selection") {
    EvalOptions opt;
    opt.kinds = {NetworkKind::CascadeNet, NetworkKind::PatternNet};
    opt.repeats = 2;
    const PerformanceTable t = run_full_matrix(db, quick_cfg(), quick_ga(), 42, opt);
    CHECK(t.evaluated == std::array<bool, 4>{true, false, false, true});
    CHECK(t.runs[0][0].size() == 2);
    CHECK(t.runs[0][1].empty());
    CHECK(t.accuracy[0][0] == (t.runs[0][0][0].accuracy_percent + t.runs[0][0][1].accuracy_percent) / 2.0);
    // Repeat 0 is the single-run result.
    CHECK(t.runs[4][3][0].accuracy_percent == a.runs[4][3][0].accuracy_percent);
    CHECK(std::isnan(t.column_average[1]));
  }
  SUBCASE("all six cases are required") {
    FeatureMatrix missing;
    for (const auto& r : db.rows) {
      if (r.label != CaseLabel::Flip) missing.rows.push_back(r);
    }
    CHECK(error_code([&] { run_full_matrix(missing, quick_cfg(), quick_ga(), 1); }) ==
          ErrorCode::InsufficientClassRows);
  }
}

TEST_CASE("reports") {
  PerformanceTable t = summarize(reference_entries());
  t.master_seed = 42;
  const std::string md = format_report_markdown(t);
  CHECK(md.find("| AB | 66.67 | 58.33 | 41.66 | 58.33 | 56.25 |") != std::string::npos);
  CHECK(md.find("| Average | 70.00 | 51.66 | 47.78 | 55.55 | 56.25 |") != std::string::npos);
  CHECK(md.find("Ranking: 1-Pattern Net, 2-Cascade, 3-Feedforward, 4-Fit Net") != std::string::npos);
  CHECK(md.find("stratified") != std::string::npos);
  CHECK(std::count(md.begin(), md.end(), '\n') > 18);

  const std::string csv = format_report_csv(t);
  CHECK(csv.rfind("cases,patternnet,feedforward,fitnet,cascade,average\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
  const PerformanceTable back = parse_report_csv(csv);
  CHECK(back.accuracy == t.accuracy);
  CHECK(back.column_average == t.column_average);
  CHECK(error_code([] { parse_report_csv("cases,x\n"); }) == ErrorCode::SchemaMismatch);

  const PerformanceTable partial = summarize(reference_entries(), {true, false, true, true});
  const PerformanceTable partial_back = parse_report_csv(format_report_csv(partial));
  CHECK(partial_back.evaluated == partial.evaluated);
  CHECK(format_report_markdown(partial).find("n/a") != std::string::npos);
}
