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
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slip/trace.hpp"

namespace slip {

inline constexpr std::size_t kFeaturesPerAxis = 9;
inline constexpr std::size_t kFeaturesPerSensor = 3 * kFeaturesPerAxis;
inline constexpr std::size_t kNumFeatures = 2 * kFeaturesPerSensor;

// Layout: sensor-major (accel, orient), then axis (x/azimuth, y/pitch,
// z/roll), then feature (mean, variance, rms, zcr, fft1..fft5).
using FeatureVector = std::array<double, kNumFeatures>;

enum class Sensor : std::size_t { Accel = 0, Orient = 1 };

enum class Feature : std::size_t {
  Mean = 0,
  Variance,
  Rms,
  Zcr,
  Fft1,
  Fft2,
  Fft3,
  Fft4,
  Fft5,
};

constexpr std::size_t feature_index(Sensor sensor, std::size_t axis, Feature feature) {
  return static_cast<std::size_t>(sensor) * kFeaturesPerSensor + axis * kFeaturesPerAxis +
         static_cast<std::size_t>(feature);
}

// Column identifiers such as `accel_x_fft3` or `orient_pitch_zcr`.
const std::array<std::string, kNumFeatures>& feature_names();

// Contents of feature_names.txt: one name per line.
std::string feature_names_text();

// Per-axis statistics. All throw Error{EmptySeries} on empty input.
double mean(std::span<const double> series);
double variance(std::span<const double> series);  // population (divisor N)
double rms(std::span<const double> series);

/// Number of adjacent pairs whose signs differ; zero counts as positive.
/// Throws Error{TooShort} for fewer than 2 samples.
std::size_t zcr(std::span<const double> series);

/// Unnormalized DFT X[k] = sum_n x[n] exp(-2 pi i k n / N). Radix-2 FFT for
/// power-of-two N, direct evaluation otherwise.
std::vector<std::complex<double>> dft(std::span<const double> series);

/// |X[1]| .. |X[5]| (DC excluded). Throws Error{TooShort} for N < 16.
std::array<double, 5> fft5(std::span<const double> series);

/// The 54-value representation of a canonical trace.
FeatureVector extract_sample_features(const SensorTrace& trace);

}  // namespace slip
