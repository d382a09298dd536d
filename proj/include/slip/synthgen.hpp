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

// Seeded generator of synthetic phone-handling traces. Each case gets a simple
// kinematic story (rest -> event -> rest) laid out on the canonical grid; the
// accelerometer reads gravity reaction rotated into the device frame plus any
// linear acceleration, and Gaussian noise is added per channel and sample.

#include <cstdint>
#include <vector>

#include "slip/trace.hpp"

namespace slip {

struct Range {
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Range&) const = default;
};

struct MotionModelParams {
  double gravity = 9.81;           // m/s^2
  double noise_sigma_accel = 0.15;  // m/s^2
  double noise_sigma_angle = 0.5;   // degrees
  double sample_rate_hz = kCanonicalRateHz;
  std::size_t length = kCanonicalLength;

  Range settle_time_s{0.3, 0.8};        // A: placement transient
  Range placement_bump{0.3, 1.2};       // A: peak transient accel, m/s^2
  Range impact_peak_g{2.0, 5.0};        // B, F: impact deceleration, multiples of g
  Range incline_deg{15.0, 35.0};        // C, D
  Range slide_accel{1.5, 3.5};          // C: along-slope accel, m/s^2
  Range slide_duration_s{1.2, 2.0};     // C
  Range slide_pitch_drift_deg{8.0, 20.0};  // C
  Range tilt_duration_s{1.0, 2.0};      // D: time to reach the tipping point
  Range flip_rotation_deg{180.0, 360.0};  // E
  Range airborne_s{0.3, 0.5};           // E
  Range free_fall_s{0.25, 0.5};         // F

  bool operator==(const MotionModelParams&) const = default;
};

// Throws Error{InvalidParams} naming the first violated constraint.
void validate(const MotionModelParams& params);

/// Per-trace seed as a pure function of (master seed, case, sample id).
std::uint64_t trace_seed(std::uint64_t master_seed, CaseLabel label, std::uint32_t sample_id);

/// Generates one trace with the case's motion signature. Bit-identical for
/// identical arguments. `sample_id` is copied into the result only.
SensorTrace generate_trace(CaseLabel label, std::uint64_t seed, const MotionModelParams& params,
                           std::uint32_t sample_id = 0);

/// 6 x samples_per_case traces ordered by (case, sample_id), each seeded with
/// trace_seed(master_seed, case, sample_id).
std::vector<SensorTrace> generate_dataset(std::uint32_t samples_per_case,
                                          std::uint64_t master_seed,
                                          const MotionModelParams& params);

}  // namespace slip
