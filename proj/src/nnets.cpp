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

#include "slip/nnets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <sstream>

#include "slip/error.hpp"
#include "slip/seed.hpp"
#include "slip/split.hpp"
#include "slip/textio.hpp"

namespace slip {

std::string_view kind_id(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::PatternNet: return "patternnet";
    case NetworkKind::Feedforward: return "feedforward";
    case NetworkKind::FitNet: return "fitnet";
    case NetworkKind::CascadeNet: return "cascade";
  }
  return "unknown";
}

std::string_view kind_display(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::PatternNet: return "Pattern Net";
    case NetworkKind::Feedforward: return "Feedforward";
    case NetworkKind::FitNet: return "Fit Net";
    case NetworkKind::CascadeNet: return "Cascade";
  }
  return "unknown";
}

std::optional<NetworkKind> parse_kind(std::string_view id) {
  for (NetworkKind k : kAllKinds) {
    if (kind_id(k) == id) return k;
  }
  return std::nullopt;
}

OutputUnits output_units(NetworkKind kind) {
  return (kind == NetworkKind::Feedforward || kind == NetworkKind::FitNet)
             ? OutputUnits::SigmoidMse
             : OutputUnits::SoftmaxCrossEntropy;
}

bool is_cascade(NetworkKind kind) { return kind == NetworkKind::CascadeNet; }

std::vector<std::size_t> default_hidden(NetworkKind kind) {
  if (is_cascade(kind)) return {10, 5};
  return {10};
}

std::vector<LayerShape> NetworkModel::layers() const {
  std::vector<LayerShape> out;
  const bool cascade = is_cascade(kind);
  std::size_t param_offset = 0;
  std::size_t act_end = input_width;
  std::size_t prev_start = 0;
  std::size_t prev_width = input_width;
  for (std::size_t k = 0; k <= hidden.size(); ++k) {
    LayerShape s;
    s.outputs = k < hidden.size() ? hidden[k] : output_width;
    s.inputs = cascade ? act_end : prev_width;
    s.input_offset = cascade ? 0 : prev_start;
    s.weight_offset = param_offset;
    param_offset += s.outputs * s.inputs;
    s.bias_offset = param_offset;
    param_offset += s.outputs;
    if (k < hidden.size()) {
      prev_start = act_end;
      prev_width = s.outputs;
      act_end += s.outputs;
    }
    out.push_back(s);
  }
  return out;
}

std::size_t NetworkModel::param_count() const {
  const auto shapes = layers();
  return shapes.back().bias_offset + shapes.back().outputs;
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Scratch buffers for one forward/backward pass over a single row.
class Pass {
 public:
  explicit Pass(const NetworkModel& model) : model_(model), shapes_(model.layers()) {
    std::size_t act_size = model.input_width;
    for (std::size_t h : model.hidden) act_size += h;
    acts_.assign(act_size, 0.0);
    dacts_.assign(act_size, 0.0);
    z_.assign(model.output_width, 0.0);
    out_.assign(model.output_width, 0.0);
    delta_.assign(model.output_width, 0.0);
    std::size_t widest = 0;
    for (std::size_t h : model.hidden) widest = std::max(widest, h);
    layer_delta_.assign(widest, 0.0);
  }

  // Fills acts_ and out_; returns out_.
  const std::vector<double>& run(std::span<const double> x) {
    const auto& p = model_.params;
    std::copy(x.begin(), x.end(), acts_.begin());
    std::size_t write = model_.input_width;
    for (std::size_t k = 0; k < shapes_.size(); ++k) {
      const LayerShape& s = shapes_[k];
      const bool last = k + 1 == shapes_.size();
      const double* in = acts_.data() + s.input_offset;
      for (std::size_t o = 0; o < s.outputs; ++o) {
        const double* w = p.data() + s.weight_offset + o * s.inputs;
        double z = p[s.bias_offset + o];
        for (std::size_t i = 0; i < s.inputs; ++i) z += w[i] * in[i];
        if (last) {
          z_[o] = z;
        } else {
          acts_[write + o] = std::tanh(z);
        }
      }
      if (!last) write += s.outputs;
    }
    if (output_units(model_.kind) == OutputUnits::SoftmaxCrossEntropy) {
      const double zmax = *std::max_element(z_.begin(), z_.end());
      double sum = 0.0;
      for (std::size_t o = 0; o < z_.size(); ++o) {
        out_[o] = std::exp(z_[o] - zmax);
        sum += out_[o];
      }
      for (double& v : out_) v /= sum;
    } else {
      for (std::size_t o = 0; o < z_.size(); ++o) out_[o] = sigmoid(z_[o]);
    }
    return out_;
  }

  // Loss contribution of the current row (already divided by `rows`) and
  // accumulation of its gradient into `grad`. Requires a preceding run().
  double backprop(std::span<const double> y, double rows, std::span<double> grad) {
    const std::size_t k_out = z_.size();
    double loss = 0.0;
    if (output_units(model_.kind) == OutputUnits::SoftmaxCrossEntropy) {
      const double zmax = *std::max_element(z_.begin(), z_.end());
      double sum = 0.0;
      for (double z : z_) sum += std::exp(z - zmax);
      const double lse = zmax + std::log(sum);
      for (std::size_t o = 0; o < k_out; ++o) {
        loss -= y[o] * (z_[o] - lse);
        delta_[o] = (out_[o] - y[o]) / rows;
      }
      loss /= rows;
    } else {
      const double denom = rows * static_cast<double>(k_out);
      for (std::size_t o = 0; o < k_out; ++o) {
        const double diff = out_[o] - y[o];
        loss += diff * diff;
        delta_[o] = 2.0 * diff / denom * out_[o] * (1.0 - out_[o]);
      }
      loss /= denom;
    }

    const auto& p = model_.params;
    std::fill(dacts_.begin(), dacts_.end(), 0.0);
    std::size_t out_start = acts_.size();
    for (std::size_t k = shapes_.size(); k-- > 0;) {
      const LayerShape& s = shapes_[k];
      const bool last = k + 1 == shapes_.size();
      const double* in = acts_.data() + s.input_offset;
      double* din = dacts_.data() + s.input_offset;
      if (!last) {
        out_start -= s.outputs;
        for (std::size_t o = 0; o < s.outputs; ++o) {
          const double h = acts_[out_start + o];
          layer_delta_[o] = dacts_[out_start + o] * (1.0 - h * h);
        }
      }
      const double* delta = last ? delta_.data() : layer_delta_.data();
      for (std::size_t o = 0; o < s.outputs; ++o) {
        const double d = delta[o];
        if (d == 0.0) continue;
        const double* w = p.data() + s.weight_offset + o * s.inputs;
        double* gw = grad.data() + s.weight_offset + o * s.inputs;
        for (std::size_t i = 0; i < s.inputs; ++i) {
          gw[i] += d * in[i];
          din[i] += w[i] * d;
        }
        grad[s.bias_offset + o] += d;
      }
    }
    return loss;
  }

 private:
  const NetworkModel& model_;
  std::vector<LayerShape> shapes_;
  std::vector<double> acts_;
  std::vector<double> dacts_;
  std::vector<double> z_;
  std::vector<double> out_;
  std::vector<double> delta_;
  std::vector<double> layer_delta_;
};

void check_shapes(const NetworkModel& model, const Matrix& X, const Matrix& Y) {
  if (X.cols() != model.input_width) {
    throw Error(ErrorCode::ShapeMismatch, "X has " + std::to_string(X.cols()) +
                                              " columns, model expects " +
                                              std::to_string(model.input_width));
  }
  if (Y.cols() != model.output_width) {
    throw Error(ErrorCode::ShapeMismatch, "Y has " + std::to_string(Y.cols()) +
                                              " columns, model has " +
                                              std::to_string(model.output_width) + " outputs");
  }
  if (X.rows() != Y.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "X and Y row counts differ");
  }
  if (X.rows() == 0) throw Error(ErrorCode::ShapeMismatch, "empty batch");
  if (model.params.size() != model.param_count()) {
    throw Error(ErrorCode::ShapeMismatch, "parameter vector does not match topology");
  }
}

std::vector<int> argmax_labels(const Matrix& Y) {
  std::vector<int> labels(Y.rows());
  for (std::size_t r = 0; r < Y.rows(); ++r) {
    const auto row = Y.row(r);
    labels[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

Matrix select_rows(const Matrix& m, std::span<const std::size_t> idx) {
  Matrix out(idx.size(), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    std::copy(m.row(idx[i]).begin(), m.row(idx[i]).end(), out.row(i).begin());
  }
  return out;
}

int decide(std::span<const double> out) {
  int best = 0;
  for (std::size_t o = 1; o < out.size(); ++o) {
    if (out[o] > out[static_cast<std::size_t>(best)]) best = static_cast<int>(o);
  }
  return best;
}

double accuracy(const NetworkModel& model, const Matrix& X, std::span<const int> labels) {
  Pass pass(model);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    if (decide(pass.run(X.row(r))) == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(X.rows());
}

struct Scored {
  Genes genes;
  double fitness = 0.0;
  std::size_t index = 0;
};

bool fitter(const Scored& a, const Scored& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  if (a.genes.learning_rate != b.genes.learning_rate) {
    return a.genes.learning_rate < b.genes.learning_rate;
  }
  return a.index < b.index;
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
  }
  if (!(cfg.momentum >= 0.0 && cfg.momentum < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "momentum must be in [0, 1)");
  }
  if (cfg.epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be >= 1");
  if (!(cfg.init_scale >= 0.0) || !std::isfinite(cfg.init_scale)) {
    throw Error(ErrorCode::InvalidArgument, "init_scale must be >= 0");
  }
  for (std::size_t h : cfg.hidden) {
    if (h == 0) throw Error(ErrorCode::InvalidArgument, "hidden layer widths must be >= 1");
  }
}

void validate(const GaConfig& ga) {
  // population 1 is accepted: the search degenerates to a single evaluation.
  if (ga.population < 1) throw Error(ErrorCode::InvalidArgument, "GA population must be >= 1");
  if (ga.generations < 1) throw Error(ErrorCode::InvalidArgument, "GA generations must be >= 1");
  if (!(ga.learning_rate_min > 0.0) || ga.learning_rate_min > ga.learning_rate_max ||
      !std::isfinite(ga.learning_rate_max)) {
    throw Error(ErrorCode::InvalidArgument, "GA learning-rate bounds invalid");
  }
  if (!(ga.momentum_min >= 0.0) || ga.momentum_min > ga.momentum_max || !(ga.momentum_max < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "GA momentum bounds invalid");
  }
  if (!(ga.mutation_rate >= 0.0 && ga.mutation_rate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "GA mutation rate must be in [0, 1]");
  }
  if (ga.tournament_size < 1) throw Error(ErrorCode::InvalidArgument, "tournament size must be >= 1");
  if (!(ga.validation_fraction > 0.0 && ga.validation_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "validation fraction must be in (0, 1)");
  }
}

NetworkModel make_model(NetworkKind kind, std::size_t input_width,
                        std::vector<std::size_t> hidden, std::size_t output_width) {
  if (input_width == 0 || output_width == 0) {
    throw Error(ErrorCode::InvalidArgument, "layer widths must be >= 1");
  }
  for (std::size_t h : hidden) {
    if (h == 0) throw Error(ErrorCode::InvalidArgument, "hidden layer widths must be >= 1");
  }
  NetworkModel m;
  m.kind = kind;
  m.input_width = input_width;
  m.hidden = std::move(hidden);
  m.output_width = output_width;
  m.params.assign(m.param_count(), 0.0);
  m.standardization = StandardizationParams::identity(input_width);
  return m;
}

NetworkModel initialize_model(NetworkKind kind, std::size_t input_width, const TrainConfig& cfg) {
  validate(cfg);
  NetworkModel m = make_model(kind, input_width, cfg.hidden.empty() ? default_hidden(kind) : cfg.hidden);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (const LayerShape& s : m.layers()) {
    const double bound = cfg.init_scale / std::sqrt(static_cast<double>(s.inputs));
    for (std::size_t i = 0; i < s.outputs * s.inputs; ++i) {
      m.params[s.weight_offset + i] = bound * unit(rng);
    }
  }
  return m;
}

std::vector<double> forward(const NetworkModel& model, std::span<const double> x) {
  if (x.size() != model.input_width) {
    throw Error(ErrorCode::ShapeMismatch, "input has " + std::to_string(x.size()) +
                                              " values, model expects " +
                                              std::to_string(model.input_width));
  }
  if (model.params.size() != model.param_count()) {
    throw Error(ErrorCode::ShapeMismatch, "parameter vector does not match topology");
  }
  Pass pass(model);
  return pass.run(x);
}

LossAndGradient compute_loss_and_gradients(const NetworkModel& model, const Matrix& X,
                                           const Matrix& Y) {
  check_shapes(model, X, Y);
  LossAndGradient result;
  result.gradient.assign(model.params.size(), 0.0);
  Pass pass(model);
  const double rows = static_cast<double>(X.rows());
  for (std::size_t r = 0; r < X.rows(); ++r) {
    pass.run(X.row(r));
    result.loss += pass.backprop(Y.row(r), rows, result.gradient);
  }
  return result;
}

Matrix one_hot(std::span<const int> labels, std::size_t classes) {
  Matrix Y(labels.size(), classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= classes) {
      throw Error(ErrorCode::ShapeMismatch, "label out of range");
    }
    Y(r, static_cast<std::size_t>(labels[r])) = 1.0;
  }
  return Y;
}

NetworkModel train_fixed(NetworkKind kind, const Matrix& X, const Matrix& Y,
                         const TrainConfig& cfg) {
  NetworkModel model = initialize_model(kind, X.cols(), cfg);
  check_shapes(model, X, Y);
  for (std::size_t c = 0; c < Y.cols(); ++c) {
    bool present = false;
    for (std::size_t r = 0; r < Y.rows() && !present; ++r) present = Y(r, c) > 0.0;
    if (!present) {
      throw Error(ErrorCode::SingleClassTraining,
                  "class " + std::to_string(c) + " is absent from the training targets");
    }
  }

  std::vector<double> velocity(model.params.size(), 0.0);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const LossAndGradient lg = compute_loss_and_gradients(model, X, Y);
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorCode::NonFiniteLoss,
                  "training diverged at epoch " + std::to_string(epoch), epoch);
    }
    for (std::size_t i = 0; i < model.params.size(); ++i) {
      velocity[i] = cfg.momentum * velocity[i] - cfg.learning_rate * lg.gradient[i];
      model.params[i] += velocity[i];
    }
  }
  for (double v : model.params) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::NonFiniteLoss,
                  "training diverged at epoch " + std::to_string(cfg.epochs), cfg.epochs);
    }
  }
  return model;
}

std::vector<Genes> initial_population(const GaConfig& ga, std::uint64_t seed) {
  validate(ga);
  std::mt19937_64 rng(derive_seed(seed, {0x6761}));
  std::uniform_real_distribution<double> log_lr(std::log(ga.learning_rate_min),
                                                std::log(ga.learning_rate_max));
  std::uniform_real_distribution<double> mom(ga.momentum_min, ga.momentum_max);
  std::vector<Genes> pop(ga.population);
  for (auto& g : pop) {
    g.learning_rate = std::exp(log_lr(rng));
    g.momentum = mom(rng);
  }
  return pop;
}

GaResult tune_hyperparameters(NetworkKind kind, const Matrix& X, const Matrix& Y,
                              const TrainConfig& cfg, const GaConfig& ga) {
  validate(cfg);
  validate(ga);
  const std::vector<int> labels = argmax_labels(Y);
  const IndexSplit inner =
      stratified_indices(labels, 1.0 - ga.validation_fraction, derive_seed(cfg.seed, {0x7661}));
  const Matrix x_fit = select_rows(X, inner.train);
  const Matrix y_fit = select_rows(Y, inner.train);
  const auto& val_idx = inner.test.empty() ? inner.train : inner.test;
  const Matrix x_val = select_rows(X, val_idx);
  std::vector<int> y_val(val_idx.size());
  for (std::size_t i = 0; i < val_idx.size(); ++i) y_val[i] = labels[val_idx[i]];

  std::map<std::pair<double, double>, double> cache;
  GaResult result;
  auto fitness = [&](const Genes& g) {
    const auto key = std::make_pair(g.learning_rate, g.momentum);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    TrainConfig c = cfg;
    c.learning_rate = g.learning_rate;
    c.momentum = g.momentum;
    double f = -1.0;
    try {
      f = accuracy(train_fixed(kind, x_fit, y_fit, c), x_val, y_val);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteLoss) throw;
    }
    ++result.evaluations;
    cache.emplace(key, f);
    return f;
  };

  const double log_lo = std::log(ga.learning_rate_min);
  const double log_hi = std::log(ga.learning_rate_max);
  std::mt19937_64 rng(derive_seed(cfg.seed, {0x6762}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<Genes> population = initial_population(ga, cfg.seed);
  for (std::size_t gen = 0; gen < ga.generations; ++gen) {
    std::vector<Scored> scored(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
      scored[i] = {population[i], fitness(population[i]), i};
    }
    std::sort(scored.begin(), scored.end(), fitter);
    result.best_fitness_per_generation.push_back(scored.front().fitness);
    if (gen == 0 || fitter(scored.front(), Scored{result.best, result.best_fitness, 0})) {
      result.best = scored.front().genes;
      result.best_fitness = scored.front().fitness;
    }
    if (gen + 1 == ga.generations) break;

    auto tournament = [&]() -> const Genes& {
      std::size_t pick = scored.size();
      for (std::size_t t = 0; t < std::min(ga.tournament_size, scored.size()); ++t) {
        const auto cand = static_cast<std::size_t>(unit(rng) * static_cast<double>(scored.size()));
        const std::size_t c = std::min(cand, scored.size() - 1);
        // scored is sorted, so the lower position is the fitter individual.
        pick = std::min(pick, c);
      }
      return scored[pick].genes;
    };

    std::vector<Genes> next;
    next.reserve(population.size());
    for (std::size_t e = 0; e < std::min(ga.elitism, scored.size()); ++e) {
      next.push_back(scored[e].genes);
    }
    while (next.size() < population.size()) {
      const Genes& a = tournament();
      const Genes& b = tournament();
      const double alpha = unit(rng);
      double llr = alpha * std::log(a.learning_rate) + (1.0 - alpha) * std::log(b.learning_rate);
      double mom = alpha * a.momentum + (1.0 - alpha) * b.momentum;
      if (unit(rng) < ga.mutation_rate) llr += 0.1 * (log_hi - log_lo) * normal(rng);
      if (unit(rng) < ga.mutation_rate) {
        mom += 0.1 * (ga.momentum_max - ga.momentum_min) * normal(rng);
      }
      llr = std::clamp(llr, log_lo, log_hi);
      next.push_back({std::clamp(std::exp(llr), ga.learning_rate_min, ga.learning_rate_max),
                      std::clamp(mom, ga.momentum_min, ga.momentum_max)});
    }
    population = std::move(next);
  }
  return result;
}

NetworkModel train(NetworkKind kind, const Matrix& X, const Matrix& Y, const TrainConfig& cfg,
                   const std::optional<GaConfig>& ga) {
  if (kind != NetworkKind::FitNet) return train_fixed(kind, X, Y, cfg);
  const GaResult search = tune_hyperparameters(kind, X, Y, cfg, ga.value_or(GaConfig{}));
  TrainConfig tuned = cfg;
  tuned.learning_rate = search.best.learning_rate;
  tuned.momentum = search.best.momentum;
  return train_fixed(kind, X, Y, tuned);
}

Prediction predict(const NetworkModel& model, std::span<const double> raw_x) {
  if (model.output_width != 2) {
    throw Error(ErrorCode::ShapeMismatch, "predict supports two-class models only");
  }
  if (raw_x.size() != model.input_width) {
    throw Error(ErrorCode::ShapeMismatch, "input has " + std::to_string(raw_x.size()) +
                                              " values, model expects " +
                                              std::to_string(model.input_width));
  }
  const std::vector<double> x = model.standardization.apply(raw_x);
  const std::vector<double> out = forward(model, x);
  Prediction p;
  if (output_units(model.kind) == OutputUnits::SoftmaxCrossEntropy) {
    p.probabilities = {out[0], out[1]};
  } else {
    const double sum = out[0] + out[1];
    p.probabilities = sum > 0.0 ? std::array<double, 2>{out[0] / sum, out[1] / sum}
                                : std::array<double, 2>{0.5, 0.5};
  }
  p.label = p.probabilities[1] > p.probabilities[0] ? 1 : 0;
  return p;
}

namespace {

void write_values(std::ostream& out, std::string_view tag, std::span<const double> values) {
  out << tag;
  for (double v : values) out << ' ' << format_double(v, 17);
  out << '\n';
}

[[noreturn]] void bad_model(const std::string& what, std::size_t line) {
  throw Error(ErrorCode::SchemaMismatch, "model line " + std::to_string(line) + ": " + what, line);
}

}  // namespace

std::string format_model(const NetworkModel& m) {
  std::ostringstream out;
  out << "slipdetect-model 1\n";
  out << "kind " << kind_id(m.kind) << '\n';
  out << "input_width " << m.input_width << '\n';
  out << "hidden";
  for (std::size_t h : m.hidden) out << ' ' << h;
  out << '\n';
  out << "output_width " << m.output_width << '\n';
  out << "standardization " << m.standardization.width() << '\n';
  write_values(out, "mean", m.standardization.mean);
  write_values(out, "scale", m.standardization.scale);
  out << "flagged";
  for (bool f : m.standardization.flagged) out << ' ' << (f ? 1 : 0);
  out << '\n';
  out << "params " << m.params.size() << '\n';
  const auto shapes = m.layers();
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto& s = shapes[k];
    write_values(out, "layer" + std::to_string(k) + "_weights",
                 std::span<const double>(m.params).subspan(s.weight_offset, s.outputs * s.inputs));
    write_values(out, "layer" + std::to_string(k) + "_bias",
                 std::span<const double>(m.params).subspan(s.bias_offset, s.outputs));
  }
  out << "end\n";
  return out.str();
}

NetworkModel parse_model(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    lines.push_back(std::move(tokens));
  }
  std::size_t at = 0;
  auto next = [&](std::string_view tag) -> const std::vector<std::string>& {
    if (at >= lines.size()) bad_model("unexpected end of file, wanted '" + std::string(tag) + "'", at + 1);
    const auto& tokens = lines[at++];
    if (tokens.empty() || tokens[0] != tag) bad_model("expected '" + std::string(tag) + "'", at);
    return tokens;
  };
  auto size_of = [&](const std::string& s) {
    auto v = parse_u64(s);
    if (!v) bad_model("bad integer '" + s + "'", at);
    return static_cast<std::size_t>(*v);
  };
  auto doubles = [&](const std::vector<std::string>& tokens, std::size_t expected) {
    if (tokens.size() != expected + 1) bad_model("wrong value count", at);
    std::vector<double> out;
    out.reserve(expected);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      auto v = parse_double(tokens[i]);
      if (!v) bad_model("bad number '" + tokens[i] + "'", at);
      out.push_back(*v);
    }
    return out;
  };

  const auto& magic = next("slipdetect-model");
  if (magic.size() != 2 || magic[1] != "1") bad_model("unsupported model version", at);
  const auto& kind_line = next("kind");
  if (kind_line.size() != 2 || !parse_kind(kind_line[1])) bad_model("unknown network kind", at);
  const NetworkKind kind = *parse_kind(kind_line[1]);
  const auto& input_line = next("input_width");
  if (input_line.size() != 2) bad_model("malformed input_width", at);
  const std::size_t input_width = size_of(input_line[1]);
  std::vector<std::size_t> hidden;
  const auto& hidden_line = next("hidden");
  for (std::size_t i = 1; i < hidden_line.size(); ++i) hidden.push_back(size_of(hidden_line[i]));
  const auto& output_line = next("output_width");
  if (output_line.size() != 2) bad_model("malformed output_width", at);
  const std::size_t output_width = size_of(output_line[1]);

  NetworkModel m;
  try {
    m = make_model(kind, input_width, hidden, output_width);
  } catch (const Error& e) {
    bad_model(e.what(), at);
  }
  const auto& std_line = next("standardization");
  if (std_line.size() != 2 || size_of(std_line[1]) != input_width) {
    bad_model("standardization width must equal input width", at);
  }
  m.standardization.mean = doubles(next("mean"), input_width);
  m.standardization.scale = doubles(next("scale"), input_width);
  const auto& flagged = next("flagged");
  if (flagged.size() != input_width + 1) bad_model("wrong flag count", at);
  for (std::size_t i = 0; i < input_width; ++i) {
    if (flagged[i + 1] != "0" && flagged[i + 1] != "1") bad_model("flags must be 0 or 1", at);
    m.standardization.flagged[i] = flagged[i + 1] == "1";
  }
  const auto& params_line = next("params");
  if (params_line.size() != 2 || size_of(params_line[1]) != m.param_count()) {
    bad_model("parameter count does not match topology", at);
  }
  const auto shapes = m.layers();
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto& s = shapes[k];
    const auto w = doubles(next("layer" + std::to_string(k) + "_weights"), s.outputs * s.inputs);
    std::copy(w.begin(), w.end(), m.params.begin() + static_cast<std::ptrdiff_t>(s.weight_offset));
    const auto b = doubles(next("layer" + std::to_string(k) + "_bias"), s.outputs);
    std::copy(b.begin(), b.end(), m.params.begin() + static_cast<std::ptrdiff_t>(s.bias_offset));
  }
  next("end");
  return m;
}

void save_model(const NetworkModel& model, const std::filesystem::path& destination) {
  write_file_atomic(destination, format_model(model));
}

NetworkModel load_model(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + source.string());
  return parse_model(in);
}

}  // namespace slip
