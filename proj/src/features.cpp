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

#include "slip/features.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <utility>

#include "slip/error.hpp"

namespace slip {

namespace {

void require_nonempty(std::span<const double> series) {
  if (series.empty()) throw Error(ErrorCode::EmptySeries, "feature of an empty series");
}

std::array<std::string, kNumFeatures> make_feature_names() {
  static constexpr std::array<const char*, 2> kSensors = {"accel", "orient"};
  static constexpr std::array<std::array<const char*, 3>, 2> kAxes = {
      {{"x", "y", "z"}, {"azimuth", "pitch", "roll"}}};
  static constexpr std::array<const char*, kFeaturesPerAxis> kFeatures = {
      "mean", "variance", "rms", "zcr", "fft1", "fft2", "fft3", "fft4", "fft5"};
  std::array<std::string, kNumFeatures> names;
  std::size_t i = 0;
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t a = 0; a < 3; ++a) {
      for (const char* f : kFeatures) {
        names[i++] = std::string(kSensors[s]) + "_" + kAxes[s][a] + "_" + f;
      }
    }
  }
  return names;
}

// In-place iterative radix-2 Cooley-Tukey; data.size() must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    // Twiddles evaluated directly rather than by repeated multiplication.
    std::vector<std::complex<double>> w(half);
    for (std::size_t k = 0; k < half; ++k) {
      w[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(len));
    }
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const std::complex<double> u = data[start + k];
        const std::complex<double> v = data[start + k + half] * w[k];
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

void fill_axis(FeatureVector& out, Sensor sensor, std::size_t axis, std::span<const double> s) {
  out[feature_index(sensor, axis, Feature::Mean)] = mean(s);
  out[feature_index(sensor, axis, Feature::Variance)] = variance(s);
  out[feature_index(sensor, axis, Feature::Rms)] = rms(s);
  out[feature_index(sensor, axis, Feature::Zcr)] = static_cast<double>(zcr(s));
  const auto bins = fft5(s);
  for (std::size_t k = 0; k < 5; ++k) {
    out[feature_index(sensor, axis, Feature::Fft1) + k] = bins[k];
  }
}

}  // namespace

const std::array<std::string, kNumFeatures>& feature_names() {
  static const auto names = make_feature_names();
  return names;
}

std::string feature_names_text() {
  std::string text;
  for (const auto& name : feature_names()) {
    text += name;
    text += '\n';
  }
  return text;
}

double mean(std::span<const double> series) {
  require_nonempty(series);
  double sum = 0.0;
  for (double x : series) sum += x;
  return sum / static_cast<double>(series.size());
}

double variance(std::span<const double> series) {
  require_nonempty(series);
  // Welford
  double m = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (double x : series) {
    ++count;
    const double delta = x - m;
    m += delta / static_cast<double>(count);
    m2 += delta * (x - m);
  }
  return m2 / static_cast<double>(count);
}

double rms(std::span<const double> series) {
  require_nonempty(series);
  // Scaled sum of squares so large magnitudes cannot overflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (double x : series) {
    if (x == 0.0) continue;
    const double ax = std::abs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  if (scale == 0.0) return 0.0;
  return scale * std::sqrt(ssq / static_cast<double>(series.size()));
}

std::size_t zcr(std::span<const double> series) {
  if (series.size() < 2) throw Error(ErrorCode::TooShort, "zcr needs at least 2 samples");
  std::size_t count = 0;
  bool prev_negative = series[0] < 0.0;
  for (std::size_t k = 1; k < series.size(); ++k) {
    const bool negative = series[k] < 0.0;
    if (negative != prev_negative) ++count;
    prev_negative = negative;
  }
  return count;
}

std::vector<std::complex<double>> dft(std::span<const double> series) {
  const std::size_t n = series.size();
  std::vector<std::complex<double>> data(series.begin(), series.end());
  if (n <= 1) return data;
  if (std::has_single_bit(n)) {
    fft_radix2(data);
    return data;
  }
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t phase = (k * j) % n;
      acc += series[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(phase) /
                                             static_cast<double>(n));
    }
    out[k] = acc;
  }
  return out;
}

std::array<double, 5> fft5(std::span<const double> series) {
  if (series.size() < 16) throw Error(ErrorCode::TooShort, "fft5 needs at least 16 samples");
  const auto spectrum = dft(series);
  std::array<double, 5> out{};
  for (std::size_t k = 0; k < 5; ++k) out[k] = std::abs(spectrum[k + 1]);
  return out;
}

FeatureVector extract_sample_features(const SensorTrace& trace) {
  if (trace.accel.size() != trace.orient.size()) {
    throw Error(ErrorCode::InvalidArgument, "accel and orient lengths differ");
  }
  if (trace.size() < 16) throw Error(ErrorCode::TooShort, "trace shorter than 16 samples");
  FeatureVector out{};
  for (std::size_t axis = 0; axis < 3; ++axis) {
    fill_axis(out, Sensor::Accel, axis, trace.accel_channel(axis));
    fill_axis(out, Sensor::Orient, axis, trace.orient_channel(axis));
  }
  return out;
}

}  // namespace slip
