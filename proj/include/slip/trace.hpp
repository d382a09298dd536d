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
#include <cstdint>
#include <vector>

#include "slip/case_label.hpp"

namespace slip {

// (ax, ay, az) in m/s^2, or (azimuth, pitch, roll) in degrees.
using Vec3 = std::array<double, 3>;

inline constexpr double kCanonicalRateHz = 50.0;
inline constexpr std::size_t kCanonicalLength = 256;

// Uniformly sampled trace: sample k is at k / sample_rate_hz seconds.
struct SensorTrace {
  CaseLabel label = CaseLabel::NormalTouchKeep;
  std::uint32_t sample_id = 0;
  double sample_rate_hz = kCanonicalRateHz;
  std::vector<Vec3> accel;
  std::vector<Vec3> orient;

  std::size_t size() const { return accel.size(); }
  std::vector<double> accel_channel(std::size_t axis) const;
  std::vector<double> orient_channel(std::size_t axis) const;

  bool operator==(const SensorTrace&) const = default;
};

// A trace as read from disk, with its original (possibly irregular) timing.
struct RawTrace {
  CaseLabel label = CaseLabel::NormalTouchKeep;
  std::uint32_t sample_id = 0;
  std::vector<double> time_s;
  std::vector<Vec3> accel;
  std::vector<Vec3> orient;

  std::size_t size() const { return time_s.size(); }

  bool operator==(const RawTrace&) const = default;
};

}  // namespace slip
