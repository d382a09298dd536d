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


#include "slip/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "slip/error.hpp"
#include "slip/eval.hpp"
#include "slip/featuredb.hpp"
#include "slip/features.hpp"
#include "slip/ingest.hpp"
#include "slip/nnets.hpp"
#include "slip/plot.hpp"
#include "slip/seed.hpp"
#include "slip/synthgen.hpp"
#include "slip/textio.hpp"

namespace slip::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string subcommand;
  fs::path in;
  fs::path out;
  fs::path features;
  std::uint64_t seed = kDefaultSeed;
  std::uint32_t samples_per_case = 20;
  double train_fraction = 0.7;
  std::string nets = "all";
  std::string pair = "all";
  std::size_t multi_seed = 1;
  std::size_t threads = 0;
  bool plot = false;
  MotionModelParams motion;
  TrainConfig train;
  GaConfig ga;
};

// Domain failure with the stage it happened in.
struct StageError {
  std::string stage;
  std::string message;
};

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorCode::InvalidArgument, message);
}

// ---------------------------------------------------------------------------
// Config file

Range read_range(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail("config: motion." + key + " must be [min, max]");
  }
  return Range{j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T read_number(const nlohmann::json& j, const std::string& key) {
  if (!j.is_number()) fail("config: " + key + " must be a number");
  if constexpr (std::is_integral_v<T>) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
      fail("config: " + key + " must be a non-negative integer");
    }
  }
  return j.get<T>();
}

std::map<std::string, Range MotionModelParams::*> motion_ranges() {
  return {
      {"settle_time_s", &MotionModelParams::settle_time_s},
      {"placement_bump", &MotionModelParams::placement_bump},
      {"impact_peak_g", &MotionModelParams::impact_peak_g},
      {"incline_deg", &MotionModelParams::incline_deg},
      {"slide_accel", &MotionModelParams::slide_accel},
      {"slide_duration_s", &MotionModelParams::slide_duration_s},
      {"slide_pitch_drift_deg", &MotionModelParams::slide_pitch_drift_deg},
      {"tilt_duration_s", &MotionModelParams::tilt_duration_s},
      {"flip_rotation_deg", &MotionModelParams::flip_rotation_deg},
      {"airborne_s", &MotionModelParams::airborne_s},
      {"free_fall_s", &MotionModelParams::free_fall_s},
  };
}

void apply_motion(const nlohmann::json& j, MotionModelParams& m) {
  if (!j.is_object()) fail("config: motion must be an object");
  const auto ranges = motion_ranges();
  for (const auto& [key, value] : j.items()) {
    if (key == "gravity") m.gravity = read_number<double>(value, key);
    else if (key == "noise_sigma_accel") m.noise_sigma_accel = read_number<double>(value, key);
    else if (key == "noise_sigma_angle") m.noise_sigma_angle = read_number<double>(value, key);
    else if (key == "sample_rate_hz") m.sample_rate_hz = read_number<double>(value, key);
    else if (key == "length") m.length = read_number<std::size_t>(value, key);
    else if (auto it = ranges.find(key); it != ranges.end()) m.*(it->second) = read_range(value, key);
    else fail("config: unknown motion key '" + key + "'");
  }
}

void apply_train(const nlohmann::json& j, TrainConfig& t) {
  if (!j.is_object()) fail("config: train must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "learning_rate") t.learning_rate = read_number<double>(value, key);
    else if (key == "momentum") t.momentum = read_number<double>(value, key);
    else if (key == "epochs") t.epochs = read_number<std::size_t>(value, key);
    else if (key == "init_scale") t.init_scale = read_number<double>(value, key);
    else if (key == "hidden") {
      if (!value.is_array()) fail("config: train.hidden must be an array");
      t.hidden.clear();
      for (const auto& h : value) t.hidden.push_back(read_number<std::size_t>(h, "train.hidden"));
    } else {
      fail("config: unknown train key '" + key + "'");
    }
  }
}

void apply_ga(const nlohmann::json& j, GaConfig& g) {
  if (!j.is_object()) fail("config: ga must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "population") g.population = read_number<std::size_t>(value, key);
    else if (key == "generations") g.generations = read_number<std::size_t>(value, key);
    else if (key == "learning_rate_min") g.learning_rate_min = read_number<double>(value, key);
    else if (key == "learning_rate_max") g.learning_rate_max = read_number<double>(value, key);
    else if (key == "momentum_min") g.momentum_min = read_number<double>(value, key);
    else if (key == "momentum_max") g.momentum_max = read_number<double>(value, key);
    else if (key == "mutation_rate") g.mutation_rate = read_number<double>(value, key);
    else if (key == "tournament_size") g.tournament_size = read_number<std::size_t>(value, key);
    else if (key == "elitism") g.elitism = read_number<std::size_t>(value, key);
    else if (key == "validation_fraction") g.validation_fraction = read_number<double>(value, key);
    else fail("config: unknown ga key '" + key + "'");
  }
}

void apply_config_file(const fs::path& path, RunConfig& cfg) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": " + e.what());
  }
  if (!j.is_object()) fail("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") cfg.seed = read_number<std::uint64_t>(value, key);
    else if (key == "samples_per_case") cfg.samples_per_case = read_number<std::uint32_t>(value, key);
    else if (key == "train_fraction") cfg.train_fraction = read_number<double>(value, key);
    else if (key == "multi_seed") cfg.multi_seed = read_number<std::size_t>(value, key);
    else if (key == "threads") cfg.threads = read_number<std::size_t>(value, key);
    else if (key == "plot") {
      if (!value.is_boolean()) fail("config: plot must be a boolean");
      cfg.plot = value.get<bool>();
    } else if (key == "nets" || key == "pair") {
      if (!value.is_string()) fail("config: " + key + " must be a string");
      (key == "nets" ? cfg.nets : cfg.pair) = value.get<std::string>();
    } else if (key == "motion") apply_motion(value, cfg.motion);
    else if (key == "train") apply_train(value, cfg.train);
    else if (key == "ga") apply_ga(value, cfg.ga);
    else fail("config: unknown key '" + key + "'");
  }
}

// ---------------------------------------------------------------------------
// Run manifest

ojson range_json(const Range& r) { return ojson::array({r.min, r.max}); }

ojson config_json(const RunConfig& cfg) {
  ojson motion;
  motion["gravity"] = cfg.motion.gravity;
  motion["noise_sigma_accel"] = cfg.motion.noise_sigma_accel;
  motion["noise_sigma_angle"] = cfg.motion.noise_sigma_angle;
  motion["sample_rate_hz"] = cfg.motion.sample_rate_hz;
  motion["length"] = cfg.motion.length;
  for (const auto& [key, member] : motion_ranges()) motion[key] = range_json(cfg.motion.*member);

  ojson train;
  train["learning_rate"] = cfg.train.learning_rate;
  train["momentum"] = cfg.train.momentum;
  train["epochs"] = cfg.train.epochs;
  train["init_scale"] = cfg.train.init_scale;
  train["hidden"] = cfg.train.hidden;

  ojson ga;
  ga["population"] = cfg.ga.population;
  ga["generations"] = cfg.ga.generations;
  ga["learning_rate_min"] = cfg.ga.learning_rate_min;
  ga["learning_rate_max"] = cfg.ga.learning_rate_max;
  ga["momentum_min"] = cfg.ga.momentum_min;
  ga["momentum_max"] = cfg.ga.momentum_max;
  ga["mutation_rate"] = cfg.ga.mutation_rate;
  ga["tournament_size"] = cfg.ga.tournament_size;
  ga["elitism"] = cfg.ga.elitism;
  ga["validation_fraction"] = cfg.ga.validation_fraction;

  ojson j;
  j["samples_per_case"] = cfg.samples_per_case;
  j["train_fraction"] = cfg.train_fraction;
  j["nets"] = cfg.nets;
  j["pair"] = cfg.pair;
  j["multi_seed"] = cfg.multi_seed;
  j["plot"] = cfg.plot;
  j["motion"] = motion;
  j["train"] = train;
  j["ga"] = ga;
  return j;
}

class Manifest {
 public:
  Manifest(const RunConfig& cfg, fs::path location) : location_(std::move(location)) {
    doc_["tool"] = "slipdetect";
    doc_["subcommand"] = cfg.subcommand;
    doc_["seed"] = cfg.seed;
    doc_["config"] = config_json(cfg);
    doc_["inputs"] = ojson::array();
    doc_["artifacts"] = ojson::array();
  }

  void input(const fs::path& path) { doc_["inputs"].push_back(entry(path, read_file(path))); }

  // Writes an artifact atomically and records its hash.
  void write(const fs::path& path, std::string_view content) {
    write_file_atomic(path, content);
    doc_["artifacts"].push_back(entry(path, content));
  }

  void finish() { write_file_atomic(location_, doc_.dump(2) + "\n"); }

 private:
  ojson entry(const fs::path& path, std::string_view content) const {
    ojson e;
    e["path"] = path.generic_string();
    e["bytes"] = content.size();
    e["sha256"] = sha256_hex(content);
    return e;
  }

  fs::path location_;
  ojson doc_;
};

// Manifest for a file output sits next to it: report.md -> report.run_manifest.json.
fs::path manifest_for_file(const fs::path& out) {
  fs::path p = out;
  p.replace_extension(".run_manifest.json");
  return p;
}

fs::path sibling(const fs::path& out, const std::string& suffix) {
  return out.parent_path() / (out.stem().string() + suffix);
}

void ensure_parent(const fs::path& file) {
  const fs::path parent = file.parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// ---------------------------------------------------------------------------
// Subcommands

std::vector<NetworkKind> selected_kinds(const std::string& nets) {
  if (nets == "all") return {kAllKinds.begin(), kAllKinds.end()};
  std::vector<NetworkKind> kinds;
  std::stringstream ss(nets);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto kind = parse_kind(item);
    if (!kind) fail("unknown network '" + item + "'");
    if (std::find(kinds.begin(), kinds.end(), *kind) == kinds.end()) kinds.push_back(*kind);
  }
  if (kinds.empty()) fail("--nets selects no network");
  std::sort(kinds.begin(), kinds.end());
  return kinds;
}

std::vector<std::size_t> selected_pairs(const std::string& pair) {
  std::vector<std::size_t> rows;
  for (std::size_t p = 0; p < kNumPairs; ++p) {
    if (pair == "all" || pair == pair_name(all_pairs()[p])) rows.push_back(p);
  }
  if (rows.empty()) fail("unknown case pair '" + pair + "' (expected AB..EF or all)");
  return rows;
}

// Rethrows a domain error with the offending file prefixed.
template <typename F>
auto with_file(const fs::path& path, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), path.generic_string() + ": " + e.what(), e.line());
  }
}

std::vector<SensorTrace> load_canonical_traces(const fs::path& dir, Manifest& manifest) {
  const auto refs = list_trace_files(dir);
  if (refs.empty()) fail("no trace files found in " + dir.generic_string());
  std::vector<SensorTrace> traces;
  traces.reserve(refs.size());
  for (const auto& ref : refs) {
    manifest.input(ref.path);
    traces.push_back(with_file(ref.path, [&] {
      return resample_window(read_trace_file(ref), kCanonicalRateHz, kCanonicalLength);
    }));
  }
  return traces;
}

FeatureMatrix load_features(const fs::path& path, Manifest& manifest) {
  manifest.input(path);
  return with_file(path, [&] { return load_matrix(path); });
}

int cmd_synth(const RunConfig& cfg, std::ostream& out) {
  validate(cfg.motion);
  if (cfg.samples_per_case == 0) fail("--samples-per-case must be positive");
  fs::create_directories(cfg.out);
  Manifest manifest(cfg, cfg.out / "run_manifest.json");

  const auto traces = generate_dataset(cfg.samples_per_case, cfg.seed, cfg.motion);
  std::string index = "case,sample_id,seed\n";
  for (const auto& t : traces) {
    manifest.write(cfg.out / trace_file_name(t.label, t.sample_id), format_trace(t));
    index += std::string(1, case_letter(t.label)) + "," + std::to_string(t.sample_id) + "," +
             std::to_string(trace_seed(cfg.seed, t.label, t.sample_id)) + "\n";
  }
  manifest.write(cfg.out / "manifest.csv", index);
  if (cfg.plot) {
    fs::create_directories(cfg.out / "plots");
    for (const auto& t : traces) {
      if (t.sample_id != 0) continue;
      const std::string name = std::string(1, case_letter(t.label)) + "_0.svg";
      manifest.write(cfg.out / "plots" / name, trace_svg(t));
    }
  }
  manifest.finish();
  out << "synth: wrote " << traces.size() << " traces to " << cfg.out.generic_string() << "\n";
  return kExitOk;
}

int cmd_ingest(const RunConfig& cfg, std::ostream& out) {
  fs::create_directories(cfg.out);
  Manifest manifest(cfg, cfg.out / "run_manifest.json");
  const auto traces = load_canonical_traces(cfg.in, manifest);
  for (const auto& t : traces) {
    manifest.write(cfg.out / trace_file_name(t.label, t.sample_id), format_trace(t));
  }
  manifest.finish();
  out << "ingest: resampled " << traces.size() << " traces to " << kCanonicalLength << " samples at "
      << kCanonicalRateHz << " Hz\n";
  return kExitOk;
}

int cmd_extract(const RunConfig& cfg, std::ostream& out) {
  ensure_parent(cfg.out);
  Manifest manifest(cfg, manifest_for_file(cfg.out));
  const auto traces = load_canonical_traces(cfg.in, manifest);
  const FeatureMatrix db = build_database(traces);
  manifest.write(cfg.out, format_matrix(db));
  manifest.write(cfg.out.parent_path() / "feature_names.txt", feature_names_text());
  manifest.finish();
  out << "extract: " << db.size() << " rows x " << kNumFeatures << " features = "
      << db.total_values() << " values\n";
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  ensure_parent(cfg.out);
  Manifest manifest(cfg, manifest_for_file(cfg.out));
  const FeatureMatrix db = load_features(cfg.features, manifest);
  std::vector<std::size_t> all(db.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto standardized = standardize(db, all);
  const CorrelationReport report = validate_correlation(standardized.matrix);
  const std::string text = format_correlation_text(report);
  manifest.write(cfg.out, text);
  manifest.write(sibling(cfg.out, ".csv"), format_correlation_csv(report));
  manifest.finish();
  out << text;
  if (!(report.intra_case_mean > report.inter_case_mean)) {
    throw Error(ErrorCode::InvalidArgument,
                "intra-case mean correlation does not exceed the inter-case mean");
  }
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  validate(cfg.train);
  validate(cfg.ga);
  const auto kinds = selected_kinds(cfg.nets);
  const auto pairs = selected_pairs(cfg.pair);
  fs::create_directories(cfg.out);
  Manifest manifest(cfg, cfg.out / "run_manifest.json");
  const FeatureMatrix db = load_features(cfg.features, manifest);

  for (std::size_t p : pairs) {
    const CasePair pair = all_pairs()[p];
    FeatureMatrix sub;
    for (const auto& row : db.rows) {
      if (row.label == pair.first || row.label == pair.second) sub.rows.push_back(row);
    }
    if (sub.count(pair.first) == 0 || sub.count(pair.second) == 0) {
      throw Error(ErrorCode::InsufficientClassRows, "feature file lacks rows for " + pair_name(pair));
    }
    std::vector<std::size_t> all(sub.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto standardized = standardize(sub, all);
    const Matrix x = to_matrix(standardized.matrix, all);
    std::vector<int> y(sub.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = sub.rows[i].label == pair.first ? 0 : 1;

    for (NetworkKind kind : kinds) {
      TrainConfig tc = cfg.train;
      tc.seed = derive_seed(cfg.seed, {p, static_cast<std::uint64_t>(kind)});
      NetworkModel model = train(kind, x, one_hot(y), tc, cfg.ga);
      model.standardization = standardized.params;
      const std::string name = pair_name(pair) + "_" + std::string(kind_id(kind)) + ".model";
      manifest.write(cfg.out / name, format_model(model));
      out << "train: " << name << "\n";
    }
  }
  manifest.finish();
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  validate(cfg.train);
  validate(cfg.ga);
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    fail("--train-fraction must be in (0, 1)");
  }
  if (cfg.multi_seed == 0) fail("--multi-seed must be positive");
  ensure_parent(cfg.out);
  Manifest manifest(cfg, manifest_for_file(cfg.out));
  const FeatureMatrix db = load_features(cfg.features, manifest);

  EvalOptions options;
  options.kinds = selected_kinds(cfg.nets);
  options.train_fraction = cfg.train_fraction;
  options.threads = cfg.threads;
  options.repeats = cfg.multi_seed;
  const PerformanceTable table = run_full_matrix(db, cfg.train, cfg.ga, cfg.seed, options);

  const std::string markdown = format_report_markdown(table);
  manifest.write(cfg.out, markdown);
  manifest.write(sibling(cfg.out, ".csv"), format_report_csv(table));
  manifest.write(sibling(cfg.out, ".seeds.csv"), format_seed_manifest(table));
  if (cfg.plot) manifest.write(sibling(cfg.out, ".svg"), table_svg(table));
  manifest.finish();
  out << markdown;
  return kExitOk;
}

int cmd_plot(const RunConfig& cfg, std::ostream& out) {
  ensure_parent(cfg.out);
  Manifest manifest(cfg, manifest_for_file(cfg.out));
  manifest.input(cfg.in);
  std::string svg;
  if (const auto ref = parse_trace_file_name(cfg.in)) {
    svg = with_file(cfg.in, [&] {
      return trace_svg(resample_window(read_trace_file(*ref), kCanonicalRateHz, kCanonicalLength));
    });
  } else {
    svg = with_file(cfg.in, [&] { return table_svg(parse_report_csv(read_file(cfg.in))); });
  }
  manifest.write(cfg.out, svg);
  manifest.finish();
  out << "plot: wrote " << cfg.out.generic_string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument grammar

// Flag values land here; only flags actually given override the config file.
struct FlagBindings {
  RunConfig values;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  std::string config_path;

  template <typename T>
  CLI::Option* bind(CLI::App* app, const std::string& name, T RunConfig::*member,
                    const std::string& help) {
    CLI::Option* opt = app->add_option(name, values.*member, help);
    overrides.emplace_back(opt, [this, member](RunConfig& c) { c.*member = values.*member; });
    return opt;
  }

  template <typename T>
  CLI::Option* bind_motion(CLI::App* app, const std::string& name, T MotionModelParams::*member,
                           const std::string& help) {
    CLI::Option* opt = app->add_option(name, values.motion.*member, help);
    overrides.emplace_back(
        opt, [this, member](RunConfig& c) { c.motion.*member = values.motion.*member; });
    return opt;
  }

  template <typename T>
  CLI::Option* bind_train(CLI::App* app, const std::string& name, T TrainConfig::*member,
                          const std::string& help) {
    CLI::Option* opt = app->add_option(name, values.train.*member, help);
    overrides.emplace_back(
        opt, [this, member](RunConfig& c) { c.train.*member = values.train.*member; });
    return opt;
  }

  template <typename T>
  CLI::Option* bind_ga(CLI::App* app, const std::string& name, T GaConfig::*member,
                       const std::string& help) {
    CLI::Option* opt = app->add_option(name, values.ga.*member, help);
    overrides.emplace_back(opt,
                           [this, member](RunConfig& c) { c.ga.*member = values.ga.*member; });
    return opt;
  }

  void flag_plot(CLI::App* app) {
    CLI::Option* opt = app->add_flag("--plot", values.plot, "also render SVG plots");
    overrides.emplace_back(opt, [this](RunConfig& c) { c.plot = values.plot; });
  }

  void config(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file; flags override it")
        ->check(CLI::ExistingFile);
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    for (const auto& [opt, apply] : overrides) {
      if (opt->count() > 0) apply(cfg);
    }
    return cfg;
  }
};

void add_seed(FlagBindings& f, CLI::App* app) {
  f.bind(app, "--seed", &RunConfig::seed, "master seed (default 42)");
}

void add_motion(FlagBindings& f, CLI::App* app) {
  f.bind_motion(app, "--gravity", &MotionModelParams::gravity, "gravity, m/s^2");
  f.bind_motion(app, "--noise-accel", &MotionModelParams::noise_sigma_accel,
                "accelerometer noise sigma, m/s^2");
  f.bind_motion(app, "--noise-angle", &MotionModelParams::noise_sigma_angle,
                "orientation noise sigma, degrees");
  f.bind_motion(app, "--rate", &MotionModelParams::sample_rate_hz, "sample rate, Hz");
  f.bind_motion(app, "--length", &MotionModelParams::length, "samples per trace");
}

void add_training(FlagBindings& f, CLI::App* app) {
  f.bind(app, "--nets", &RunConfig::nets, "all or a comma list of patternnet,feedforward,fitnet,cascade");
  f.bind_train(app, "--epochs", &TrainConfig::epochs, "training epochs");
  f.bind_train(app, "--learning-rate", &TrainConfig::learning_rate, "learning rate");
  f.bind_train(app, "--momentum", &TrainConfig::momentum, "momentum");
  f.bind_ga(app, "--ga-population", &GaConfig::population, "FitNet search population");
  f.bind_ga(app, "--ga-generations", &GaConfig::generations, "FitNet search generations");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phone slip detection from motion-sensor traces", "slipdetect"};
  app.require_subcommand(1, 1);
  app.allow_windows_style_options(false);
  FlagBindings f;

  CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic trace corpus");
  f.bind(synth, "--out", &RunConfig::out, "output directory")->required();
  add_seed(f, synth);
  f.bind(synth, "--samples-per-case", &RunConfig::samples_per_case, "traces per case (default 20)");
  add_motion(f, synth);
  f.flag_plot(synth);
  f.config(synth);

  CLI::App* ingest = app.add_subcommand("ingest", "resample recorded traces to the canonical window");
  f.bind(ingest, "--in", &RunConfig::in, "directory of <case>_<id>.csv traces")
      ->required()
      ->check(CLI::ExistingDirectory);
  f.bind(ingest, "--out", &RunConfig::out, "output directory")->required();
  f.config(ingest);

  CLI::App* extract = app.add_subcommand("extract", "build the feature database from traces");
  f.bind(extract, "--in", &RunConfig::in, "directory of <case>_<id>.csv traces")
      ->required()
      ->check(CLI::ExistingDirectory);
  f.bind(extract, "--out", &RunConfig::out, "feature CSV")->required();
  f.config(extract);

  CLI::App* validate_cmd = app.add_subcommand("validate", "intra/inter-case correlation check");
  f.bind(validate_cmd, "--features", &RunConfig::features, "feature CSV")
      ->required()
      ->check(CLI::ExistingFile);
  f.bind(validate_cmd, "--out", &RunConfig::out, "correlation report (text)")->required();
  f.config(validate_cmd);

  CLI::App* train_cmd = app.add_subcommand("train", "train pairwise classifiers on all rows");
  f.bind(train_cmd, "--features", &RunConfig::features, "feature CSV")
      ->required()
      ->check(CLI::ExistingFile);
  f.bind(train_cmd, "--out", &RunConfig::out, "model directory")->required();
  f.bind(train_cmd, "--pair", &RunConfig::pair, "case pair such as AF, or all");
  add_seed(f, train_cmd);
  add_training(f, train_cmd);
  f.config(train_cmd);

  CLI::App* eval = app.add_subcommand("eval", "pairwise evaluation of every network kind");
  f.bind(eval, "--features", &RunConfig::features, "feature CSV")
      ->required()
      ->check(CLI::ExistingFile);
  f.bind(eval, "--out", &RunConfig::out, "Markdown report; .csv, .seeds.csv and .svg go beside it")
      ->required();
  add_seed(f, eval);
  f.bind(eval, "--train-fraction", &RunConfig::train_fraction, "per-case training share (default 0.7)");
  f.bind(eval, "--multi-seed", &RunConfig::multi_seed, "average k independently seeded runs");
  f.bind(eval, "--threads", &RunConfig::threads, "worker threads, 0 = all cores");
  add_training(f, eval);
  f.flag_plot(eval);
  f.config(eval);

  CLI::App* plot = app.add_subcommand("plot", "render a trace CSV or report CSV as SVG");
  f.bind(plot, "--in", &RunConfig::in, "trace file <case>_<id>.csv or report CSV")
      ->required()
      ->check(CLI::ExistingFile);
  f.bind(plot, "--out", &RunConfig::out, "SVG destination")->required();
  f.config(plot);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  std::string stage = chosen->get_name();
  try {
    stage = "config";
    RunConfig cfg = f.resolve();
    cfg.subcommand = chosen->get_name();
    stage = cfg.subcommand;
    if (chosen == synth) return cmd_synth(cfg, out);
    if (chosen == ingest) return cmd_ingest(cfg, out);
    if (chosen == extract) return cmd_extract(cfg, out);
    if (chosen == validate_cmd) return cmd_validate(cfg, out);
    if (chosen == train_cmd) return cmd_train(cfg, out);
    if (chosen == eval) return cmd_eval(cfg, out);
    return cmd_plot(cfg, out);
  } catch (const Error& e) {
    err << "error: " << stage << ": " << e.what() << " [" << to_string(e.code()) << "]\n";
  } catch (const fs::filesystem_error& e) {
    err << "error: " << stage << ": " << e.what() << " [IoFailure]\n";
  } catch (const std::exception& e) {
    err << "error: " << stage << ": " << e.what() << "\n";
  }
  return kExitDomainError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace slip::cli
