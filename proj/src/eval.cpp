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

#include "slip/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "slip/error.hpp"
#include "slip/seed.hpp"
#include "slip/split.hpp"
#include "slip/textio.hpp"

namespace slip {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::array<CasePair, kNumPairs> make_pairs() {
  std::array<CasePair, kNumPairs> pairs{};
  std::size_t n = 0;
  for (std::size_t i = 0; i < kNumCases; ++i) {
    for (std::size_t j = i + 1; j < kNumCases; ++j) pairs[n++] = {kAllCases[i], kAllCases[j]};
  }
  return pairs;
}

std::size_t kind_column(NetworkKind kind) { return static_cast<std::size_t>(kind); }

std::string fmt2(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_full(double v) { return std::isnan(v) ? std::string("nan") : format_double(v, 17); }

struct Task {
  std::size_t pair;
  std::size_t column;
  std::size_t repeat;
  std::uint64_t seed;
};

}  // namespace

const std::array<CasePair, kNumPairs>& all_pairs() {
  static const auto pairs = make_pairs();
  return pairs;
}

std::string pair_name(CasePair pair) {
  return {case_letter(pair.first), case_letter(pair.second)};
}

SplitPlan stratified_split(const FeatureMatrix& matrix, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must be in (0, 1)");
  }
  for (CaseLabel c : kAllCases) {
    const std::size_t n = matrix.count(c);
    if (n == 1) {
      throw Error(ErrorCode::InsufficientClassRows,
                  std::string("case ") + case_letter(c) + " has 1 row, need at least 2");
    }
  }
  if (matrix.size() == 0) throw Error(ErrorCode::InsufficientClassRows, "matrix has no rows");
  std::vector<int> labels(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    labels[i] = static_cast<int>(case_index(matrix.rows[i].label));
  }
  IndexSplit split = stratified_indices(labels, train_fraction, seed);
  return {std::move(split.train), std::move(split.test), seed};
}

PairResult evaluate_pair(const FeatureMatrix& matrix, CasePair pair, NetworkKind kind,
                         const TrainConfig& cfg, const GaConfig& ga, std::uint64_t seed,
                         double train_fraction) {
  FeatureMatrix sub;
  for (const auto& row : matrix.rows) {
    if (row.label == pair.first || row.label == pair.second) sub.rows.push_back(row);
  }
  if (sub.count(pair.first) == 0 || sub.count(pair.second) == 0) {
    throw Error(ErrorCode::InsufficientClassRows,
                "matrix lacks rows for pair " + pair_name(pair));
  }
  const SplitPlan plan = stratified_split(sub, train_fraction, derive_seed(seed, {1}));

  const Matrix raw_train = to_matrix(sub, plan.train);
  std::vector<std::size_t> all_train(plan.train.size());
  for (std::size_t i = 0; i < all_train.size(); ++i) all_train[i] = i;
  const StandardizationParams standardization = fit_standardization(raw_train, all_train);

  Matrix x_train = raw_train;
  std::vector<int> y_train(plan.train.size());
  for (std::size_t i = 0; i < plan.train.size(); ++i) {
    standardization.apply_in_place(x_train.row(i));
    y_train[i] = sub.rows[plan.train[i]].label == pair.first ? 0 : 1;
  }

  TrainConfig task_cfg = cfg;
  task_cfg.seed = derive_seed(seed, {2});
  NetworkModel model = train(kind, x_train, one_hot(y_train), task_cfg, ga);
  model.standardization = standardization;

  PairResult result;
  result.seed = seed;
  result.test_count = plan.test.size();
  for (std::size_t idx : plan.test) {
    const auto& row = sub.rows[idx];
    const int truth = row.label == pair.first ? 0 : 1;
    if (predict(model, row.values).label == truth) ++result.correct;
  }
  result.accuracy_percent =
      100.0 * static_cast<double>(result.correct) / static_cast<double>(result.test_count);
  return result;
}

bool PerformanceTable::any_evaluated() const {
  return std::any_of(evaluated.begin(), evaluated.end(), [](bool b) { return b; });
}

PerformanceTable summarize(const TableEntries& entries, std::array<bool, kNumKinds> evaluated) {
  PerformanceTable t;
  t.evaluated = evaluated;
  double grand = 0.0;
  std::size_t grand_n = 0;
  std::array<double, kNumKinds> col_sum{};
  for (std::size_t r = 0; r < kNumPairs; ++r) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      if (!evaluated[c]) {
        t.accuracy[r][c] = kNaN;
        continue;
      }
      const double v = entries[r][c];
      if (!(v >= 0.0 && v <= 100.0)) {
        throw Error(ErrorCode::InvalidArgument, "accuracy outside [0, 100]");
      }
      t.accuracy[r][c] = v;
      sum += v;
      col_sum[c] += v;
      grand += v;
      ++n;
      ++grand_n;
    }
    t.row_average[r] = n ? sum / static_cast<double>(n) : kNaN;
  }
  for (std::size_t c = 0; c < kNumKinds; ++c) {
    t.column_average[c] = evaluated[c] ? col_sum[c] / static_cast<double>(kNumPairs) : kNaN;
  }
  t.grand_average = grand_n ? grand / static_cast<double>(grand_n) : kNaN;
  return t;
}

PerformanceTable run_full_matrix(const FeatureMatrix& matrix, const TrainConfig& cfg,
                                 const GaConfig& ga, std::uint64_t master_seed,
                                 const EvalOptions& options) {
  for (CaseLabel c : kAllCases) {
    if (matrix.count(c) < 2) {
      throw Error(ErrorCode::InsufficientClassRows,
                  std::string("case ") + case_letter(c) + " needs at least 2 rows");
    }
  }
  if (options.repeats < 1) throw Error(ErrorCode::InvalidArgument, "repeats must be >= 1");
  validate(cfg);
  validate(ga);

  std::array<bool, kNumKinds> evaluated{};
  for (NetworkKind k : options.kinds) evaluated[kind_column(k)] = true;

  std::vector<Task> tasks;
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      if (!evaluated[c]) continue;
      for (std::size_t rep = 0; rep < options.repeats; ++rep) {
        tasks.push_back({p, c, rep, derive_seed(master_seed, {p, c, rep})});
      }
    }
  }

  std::vector<PairResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      try {
        results[i] = evaluate_pair(matrix, all_pairs()[t.pair], kAllKinds[t.column], cfg, ga,
                                   t.seed, options.train_fraction);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, tasks.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TableEntries entries{};
  std::array<std::array<std::vector<PairResult>, kNumKinds>, kNumPairs> runs{};
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    runs[tasks[i].pair][tasks[i].column].push_back(results[i]);
  }
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      if (!evaluated[c]) continue;
      double sum = 0.0;
      for (const auto& r : runs[p][c]) sum += r.accuracy_percent;
      entries[p][c] = sum / static_cast<double>(runs[p][c].size());
    }
  }
  PerformanceTable table = summarize(entries, evaluated);
  table.runs = std::move(runs);
  table.master_seed = master_seed;
  table.train_fraction = options.train_fraction;
  return table;
}

std::vector<NetworkKind> rank_networks(const PerformanceTable& table) {
  std::vector<NetworkKind> kinds;
  for (NetworkKind k : kAllKinds) {
    if (table.evaluated[kind_column(k)]) kinds.push_back(k);
  }
  std::stable_sort(kinds.begin(), kinds.end(), [&](NetworkKind a, NetworkKind b) {
    return table.column_average[kind_column(a)] > table.column_average[kind_column(b)];
  });
  return kinds;
}

std::string format_report_markdown(const PerformanceTable& t) {
  std::ostringstream out;
  std::size_t repeats = 0;
  for (const auto& row : t.runs) {
    for (const auto& cell : row) repeats = std::max(repeats, cell.size());
  }
  out << "# Classification performance\n\n";
  out << "Pairwise two-class accuracy on held-out rows. Each case pair is split per case ("
      << fmt2(100.0 * t.train_fraction) << "% train / " << fmt2(100.0 * (1.0 - t.train_fraction))
      << "% test, stratified); ";
  if (repeats > 1) {
    out << "entries average " << repeats << " independently seeded runs";
  } else {
    out << "one run per (pair, network)";
  }
  out << ". Master seed " << t.master_seed << ".\n\n";
  out << "| Cases |";
  for (NetworkKind k : kAllKinds) out << ' ' << kind_display(k) << " (%) |";
  out << " Average on cases (%) |\n";
  out << "|---|---|---|---|---|---|\n";
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    out << "| " << pair_name(all_pairs()[p]) << " |";
    for (std::size_t c = 0; c < kNumKinds; ++c) out << ' ' << fmt2(t.accuracy[p][c]) << " |";
    out << ' ' << fmt2(t.row_average[p]) << " |\n";
  }
  out << "| Average |";
  for (std::size_t c = 0; c < kNumKinds; ++c) out << ' ' << fmt2(t.column_average[c]) << " |";
  out << ' ' << fmt2(t.grand_average) << " |\n\n";
  out << "Ranking:";
  const auto ranking = rank_networks(t);
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    out << (i ? ", " : " ") << (i + 1) << '-' << kind_display(ranking[i]);
  }
  out << '\n';
  return out.str();
}

std::string format_report_csv(const PerformanceTable& t) {
  std::string out = "cases";
  for (NetworkKind k : kAllKinds) {
    out += ',';
    out += kind_id(k);
  }
  out += ",average\n";
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    out += pair_name(all_pairs()[p]);
    for (std::size_t c = 0; c < kNumKinds; ++c) out += ',' + fmt_full(t.accuracy[p][c]);
    out += ',' + fmt_full(t.row_average[p]) + '\n';
  }
  out += "average";
  for (std::size_t c = 0; c < kNumKinds; ++c) out += ',' + fmt_full(t.column_average[c]);
  out += ',' + fmt_full(t.grand_average) + '\n';
  return out;
}

std::string format_seed_manifest(const PerformanceTable& t) {
  std::string out = "pair,network,repeat,seed,correct,test_count,accuracy_percent\n";
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      for (std::size_t r = 0; r < t.runs[p][c].size(); ++r) {
        const PairResult& run = t.runs[p][c][r];
        out += pair_name(all_pairs()[p]) + ',' + std::string(kind_id(kAllKinds[c])) + ',' +
               std::to_string(r) + ',' + std::to_string(run.seed) + ',' +
               std::to_string(run.correct) + ',' + std::to_string(run.test_count) + ',' +
               format_double(run.accuracy_percent, 17) + '\n';
      }
    }
  }
  return out;
}

PerformanceTable parse_report_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::SchemaMismatch, "report row " + std::to_string(line_no) + ": " + what,
                line_no);
  };
  if (!std::getline(in, line)) fail("empty report");
  ++line_no;
  if (line != "cases,patternnet,feedforward,fitnet,cascade,average") fail("unexpected header");
  TableEntries entries{};
  std::array<bool, kNumKinds> evaluated{true, true, true, true};
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    if (!std::getline(in, line)) fail("missing pair rows");
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.size() != kNumKinds + 2 || fields[0] != pair_name(all_pairs()[p])) {
      fail("expected row " + pair_name(all_pairs()[p]));
    }
    for (std::size_t c = 0; c < kNumKinds; ++c) {
      if (fields[c + 1] == "nan") {
        evaluated[c] = false;
        continue;
      }
      auto v = parse_double(fields[c + 1]);
      if (!v) fail("bad accuracy value");
      entries[p][c] = *v;
    }
  }
  return summarize(entries, evaluated);
}

}  // namespace slip
