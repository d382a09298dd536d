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


// Independent reference computations used by the tests. Each one is written
// the slow, obvious way and shares no code with the library.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "slip/nnets.hpp"

namespace oracle {

// X[k] = sum_n x[n] exp(-2 pi i k n / N), one bin at a time.
inline std::complex<double> dft_bin(const std::vector<double>& x, std::size_t k) {
  const double n_total = static_cast<double>(x.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * n % x.size()) / n_total;
    re += x[n] * std::cos(angle);
    im += x[n] * std::sin(angle);
  }
  return {re, im};
}

inline double mean(const std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += v;
  return static_cast<double>(s / x.size());
}

// Two-pass population variance.
inline double variance(const std::vector<double>& x) {
  const long double m = mean(x);
  long double s = 0.0L;
  for (double v : x) s += (v - m) * (v - m);
  return static_cast<double>(s / x.size());
}

inline double rms(const std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += static_cast<long double>(v) * v;
  return static_cast<double>(std::sqrt(s / x.size()));
}

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

inline double relative_error(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

// Loss of `model` on (X, Y) recomputed in extended precision from the raw
// parameter vector: tanh hidden units over the buffer [x | h0 | h1 | ...];
// cascade layers read the whole prefix, plain layers their predecessor.
// Mean cross-entropy for softmax kinds, mean squared error per output element
// for sigmoid kinds.
inline long double extended_loss(const slip::NetworkModel& model, const slip::Matrix& X,
                                 const slip::Matrix& Y) {
  const bool cascade = slip::is_cascade(model.kind);
  const bool softmax = slip::output_units(model.kind) == slip::OutputUnits::SoftmaxCrossEntropy;
  std::vector<std::size_t> widths{model.input_width};
  widths.insert(widths.end(), model.hidden.begin(), model.hidden.end());
  widths.push_back(model.output_width);
  long double total = 0.0L;
  for (std::size_t r = 0; r < X.rows(); ++r) {
    std::vector<long double> buf(X.row(r).begin(), X.row(r).end());
    std::size_t offset = 0;  // parameter cursor: weights then biases, layer by layer
    std::size_t pred = 0;    // start of the predecessor block in buf
    std::vector<long double> z;
    for (std::size_t k = 1; k < widths.size(); ++k) {
      const std::size_t start = cascade ? 0 : pred;
      const std::size_t in = cascade ? buf.size() : widths[k - 1];
      const std::size_t out = widths[k];
      z.assign(out, 0.0L);
      for (std::size_t o = 0; o < out; ++o) {
        long double acc = model.params[offset + out * in + o];
        for (std::size_t i = 0; i < in; ++i) {
          acc += static_cast<long double>(model.params[offset + o * in + i]) * buf[start + i];
        }
        z[o] = acc;
      }
      offset += out * in + out;
      if (k + 1 < widths.size()) {
        pred = buf.size();
        for (long double v : z) buf.push_back(std::tanh(v));
      }
    }
    if (softmax) {
      long double mx = z[0];
      for (long double v : z) mx = std::max(mx, v);
      long double s = 0.0L;
      for (long double v : z) s += std::exp(v - mx);
      for (std::size_t o = 0; o < z.size(); ++o) total -= Y(r, o) * (z[o] - mx - std::log(s));
    } else {
      for (std::size_t o = 0; o < z.size(); ++o) {
        const long double d = 1.0L / (1.0L + std::exp(-z[o])) - Y(r, o);
        total += d * d;
      }
    }
  }
  const long double n = static_cast<long double>(X.rows());
  return softmax ? total / n : total / (n * static_cast<long double>(model.output_width));
}

// Central-difference derivative of the loss with respect to every parameter,
// evaluated in extended precision so cancellation stays far below the step.
inline std::vector<double> numeric_gradient(slip::NetworkModel model, const slip::Matrix& X,
                                            const slip::Matrix& Y, double eps = 1e-5) {
  std::vector<double> g(model.params.size());
  for (std::size_t i = 0; i < model.params.size(); ++i) {
    const double saved = model.params[i];
    model.params[i] = saved + eps;
    const long double up = extended_loss(model, X, Y);
    const double hi = model.params[i];
    model.params[i] = saved - eps;
    const long double down = extended_loss(model, X, Y);
    const double lo = model.params[i];
    model.params[i] = saved;
    g[i] = static_cast<double>((up - down) / (static_cast<long double>(hi) - lo));
  }
  return g;
}

// Worst mismatch between analytic and numeric gradients: relative error for
// components above `floor` in magnitude, absolute error otherwise.
inline double gradient_mismatch(const std::vector<double>& analytic,
                                const std::vector<double>& numeric, double floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double a = analytic[i];
    const double n = numeric[i];
    const double mag = std::max(std::abs(a), std::abs(n));
    const double err = mag < floor ? std::abs(a - n) : std::abs(a - n) / mag;
    worst = std::max(worst, err);
  }
  return worst;
}

// Plain MLP forward pass from explicit per-layer weights; tanh hidden units.
struct DenseLayer {
  std::vector<std::vector<double>> w;  // outputs x inputs
  std::vector<double> b;
};

inline std::vector<double> mlp_forward(const std::vector<DenseLayer>& layers,
                                       std::vector<double> x, bool softmax_out) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<double> z(layers[l].b);
    for (std::size_t o = 0; o < z.size(); ++o) {
      for (std::size_t i = 0; i < x.size(); ++i) z[o] += layers[l].w[o][i] * x[i];
    }
    if (l + 1 < layers.size()) {
      for (auto& v : z) v = std::tanh(v);
    } else if (softmax_out) {
      double mx = z[0];
      for (double v : z) mx = std::max(mx, v);
      double s = 0.0;
      for (auto& v : z) s += (v = std::exp(v - mx));
      for (auto& v : z) v /= s;
    } else {
      for (auto& v : z) v = 1.0 / (1.0 + std::exp(-v));
    }
    x = std::move(z);
  }
  return x;
}

// Columns of layer k's weights that read its immediate predecessor: all of
// them for a plain stack; for a cascade, the block of hidden[k - 1] (or the
// input when k = 0) inside the prefix [x | h0 | h1 | ...].
inline std::pair<std::size_t, std::size_t> predecessor_block(const slip::NetworkModel& m,
                                                             std::size_t k) {
  if (!slip::is_cascade(m.kind)) return {0, m.layers()[k].inputs};
  if (k == 0) return {0, m.input_width};
  std::size_t start = m.input_width;
  for (std::size_t j = 0; j + 1 < k; ++j) start += m.hidden[j];
  return {start, m.hidden[k - 1]};
}

// Zeroes every cascade weight that does not come from the immediate predecessor.
inline void zero_skip_weights(slip::NetworkModel& m) {
  const auto shapes = m.layers();
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto [start, width] = predecessor_block(m, k);
    for (std::size_t o = 0; o < shapes[k].outputs; ++o) {
      for (std::size_t i = 0; i < shapes[k].inputs; ++i) {
        if (i < start || i >= start + width) {
          m.params[shapes[k].weight_offset + o * shapes[k].inputs + i] = 0.0;
        }
      }
    }
  }
}

// The plain-stack layers a cascade model reduces to once its skips are zero.
inline std::vector<DenseLayer> predecessor_layers(const slip::NetworkModel& m) {
  const auto shapes = m.layers();
  std::vector<DenseLayer> out;
  for (std::size_t k = 0; k < shapes.size(); ++k) {
    const auto [start, width] = predecessor_block(m, k);
    DenseLayer d;
    for (std::size_t o = 0; o < shapes[k].outputs; ++o) {
      std::vector<double> row;
      for (std::size_t i = start; i < start + width; ++i) {
        row.push_back(m.params[shapes[k].weight_offset + o * shapes[k].inputs + i]);
      }
      d.w.push_back(row);
      d.b.push_back(m.params[shapes[k].bias_offset + o]);
    }
    out.push_back(d);
  }
  return out;
}

// Reference accuracy table: rows AB..EF, columns Pattern Net, Feedforward,
// Fit Net, Cascade; then its printed row, column and grand averages.
inline constexpr double kReference[15][4] = {
    {66.67, 58.33, 41.66, 58.33}, {66.67, 66.66, 50, 58.33}, {91.66, 50, 50, 75},
    {83.33, 50, 50, 58.33},       {100, 50, 58.33, 50},      {66.66, 50, 41.66, 41.66},
    {75, 58.33, 41.66, 58.33},    {58.33, 58.33, 50, 66.66}, {58.33, 50, 50, 58.33},
    {75, 41.66, 50, 41.66},       {83.33, 41.66, 50, 50},    {58.33, 50, 50, 41.66},
    {50, 50, 41.66, 58.33},       {58.33, 41.66, 41.66, 66.66}, {58.33, 58.33, 50, 50},
};
inline constexpr double kReferenceRowAverage[15] = {
    56.247, 60.415, 66.665, 60.415, 64.582, 49.995, 58.330, 58.330,
    54.165, 52.080, 56.247, 49.997, 49.997, 52.077, 54.165};
inline constexpr double kReferenceColumnAverage[4] = {69.998, 51.664, 47.775, 55.552};
inline constexpr double kReferenceGrandAverage = 56.247;

}  // namespace oracle
