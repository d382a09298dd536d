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

// Two-class neural classifiers trained from scratch.
//
// All four kinds share one parameter layout and one backpropagation routine:
// a stack of dense layers with tanh hidden units. Activations of the input
// and every hidden layer live in one contiguous buffer [x | h0 | h1 | ...];
// a plain layer reads the block of its predecessor, a cascade layer reads the
// whole prefix (input plus all earlier layers). Each layer's parameters are
// stored as a row-major weight block (outputs x inputs) followed by biases.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slip/featuredb.hpp"
#include "slip/matrix.hpp"

namespace slip {

// Declared in the column order of the performance table.
enum class NetworkKind { PatternNet = 0, Feedforward = 1, FitNet = 2, CascadeNet = 3 };

inline constexpr std::array<NetworkKind, 4> kAllKinds = {
    NetworkKind::PatternNet, NetworkKind::Feedforward, NetworkKind::FitNet,
    NetworkKind::CascadeNet};

std::string_view kind_id(NetworkKind kind);       // "patternnet", "feedforward", ...
std::string_view kind_display(NetworkKind kind);  // "Pattern Net", ...
std::optional<NetworkKind> parse_kind(std::string_view id);

enum class OutputUnits {
  SoftmaxCrossEntropy,  // PatternNet, CascadeNet
  SigmoidMse,           // Feedforward, FitNet
};

OutputUnits output_units(NetworkKind kind);
bool is_cascade(NetworkKind kind);
std::vector<std::size_t> default_hidden(NetworkKind kind);

struct LayerShape {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::size_t input_offset = 0;  // start of this layer's input in the activation buffer
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;
};

struct NetworkModel {
  NetworkKind kind = NetworkKind::PatternNet;
  std::size_t input_width = 0;
  std::vector<std::size_t> hidden;
  std::size_t output_width = 2;
  std::vector<double> params;
  StandardizationParams standardization;

  std::vector<LayerShape> layers() const;
  std::size_t param_count() const;

  bool operator==(const NetworkModel&) const = default;
};

struct TrainConfig {
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::size_t epochs = 500;
  std::uint64_t seed = 1;
  double init_scale = 1.0;  // weights ~ U(-s/sqrt(fan_in), s/sqrt(fan_in)); biases 0
  std::vector<std::size_t> hidden;  // empty -> default_hidden(kind)
};

struct GaConfig {
  std::size_t population = 12;
  std::size_t generations = 8;
  double learning_rate_min = 1e-3;
  double learning_rate_max = 0.5;
  double momentum_min = 0.0;
  double momentum_max = 0.95;
  double mutation_rate = 0.2;
  std::size_t tournament_size = 3;
  std::size_t elitism = 1;
  double validation_fraction = 0.25;
};

void validate(const TrainConfig& cfg);
void validate(const GaConfig& ga);

/// Zero-initialized model with the given topology and identity standardization.
NetworkModel make_model(NetworkKind kind, std::size_t input_width,
                        std::vector<std::size_t> hidden, std::size_t output_width = 2);

/// Model with weights drawn from cfg.seed.
NetworkModel initialize_model(NetworkKind kind, std::size_t input_width, const TrainConfig& cfg);

/// Network output for an already-standardized input: softmax probabilities
/// or raw sigmoid activations depending on output_units(kind).
std::vector<double> forward(const NetworkModel& model, std::span<const double> x);

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;  // same layout as NetworkModel::params
};

/// Mean cross-entropy (softmax kinds) or mean squared error over all output
/// elements (sigmoid kinds), with exact gradients. X is standardized; Y holds
/// one-hot rows. Throws Error{ShapeMismatch}.
LossAndGradient compute_loss_and_gradients(const NetworkModel& model, const Matrix& X,
                                           const Matrix& Y);

Matrix one_hot(std::span<const int> labels, std::size_t classes = 2);

/// Full-batch gradient descent with momentum at cfg's learning rate and
/// momentum, no hyperparameter search. Throws Error{SingleClassTraining},
/// Error{NonFiniteLoss} (line() = epoch).
NetworkModel train_fixed(NetworkKind kind, const Matrix& X, const Matrix& Y,
                         const TrainConfig& cfg);

struct Genes {
  double learning_rate = 0.0;
  double momentum = 0.0;

  bool operator==(const Genes&) const = default;
};

struct GaResult {
  Genes best;
  double best_fitness = 0.0;
  std::vector<double> best_fitness_per_generation;
  std::size_t evaluations = 0;
};

std::vector<Genes> initial_population(const GaConfig& ga, std::uint64_t seed);

/// Genetic search over (learning rate, momentum). Fitness is accuracy on a
/// stratified inner validation split of the training rows.
GaResult tune_hyperparameters(NetworkKind kind, const Matrix& X, const Matrix& Y,
                              const TrainConfig& cfg, const GaConfig& ga);

/// Trains one classifier. FitNet runs tune_hyperparameters first and then
/// retrains on all rows with the best genes; `ga` is ignored for other kinds
/// and defaults to GaConfig{} for FitNet when absent.
NetworkModel train(NetworkKind kind, const Matrix& X, const Matrix& Y, const TrainConfig& cfg,
                   const std::optional<GaConfig>& ga = std::nullopt);

struct Prediction {
  int label = 0;
  std::array<double, 2> probabilities{};
};

/// Applies the stored standardization, then the network. Ties go to label 0.
Prediction predict(const NetworkModel& model, std::span<const double> raw_x);

// Self-describing text format; 17 significant digits.
std::string format_model(const NetworkModel& model);
NetworkModel parse_model(std::istream& in);
void save_model(const NetworkModel& model, const std::filesystem::path& destination);
NetworkModel load_model(const std::filesystem::path& source);

}  // namespace slip
