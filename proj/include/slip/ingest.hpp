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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slip/trace.hpp"

namespace slip {

inline constexpr std::string_view kTraceHeader = "t,ax,ay,az,azimuth,pitch,roll";

// Canonical angle ranges: azimuth [0, 360), pitch [-180, 180], roll [-90, 90].
// Values already inside their range are returned unchanged (bit for bit).
double wrap_azimuth(double deg);
double wrap_pitch(double deg);
double wrap_roll(double deg);
Vec3 wrap_orientation(const Vec3& orient);

// Shortest signed difference `to - from` on the circle of the given channel
// (period 360 for azimuth/pitch, 180 for roll).
double angle_delta(std::size_t channel, double from, double to);

/// Parses a trace CSV (header `t,ax,ay,az,azimuth,pitch,roll`). Timing is kept
/// as read; angles are wrapped into their canonical ranges.
///
/// Throws Error{MalformedRow} with the offending line number,
/// Error{NonMonotonicTime} or Error{TooShort}.
RawTrace parse_trace(std::istream& source, CaseLabel label, std::uint32_t sample_id);

/// Linearly interpolates every channel onto a uniform `rate_hz` grid starting
/// at the first timestamp and returns exactly `length` samples. Past the end
/// of the input the last value is held. Angles are interpolated along the
/// shortest arc and re-wrapped.
SensorTrace resample_window(const RawTrace& trace, double rate_hz, std::size_t length);
SensorTrace resample_window(const SensorTrace& trace, double rate_hz, std::size_t length);

RawTrace to_raw(const SensorTrace& trace);

/// Serializes with the trace header, 9 significant digits per field.
void write_trace(std::ostream& out, const SensorTrace& trace);
std::string format_trace(const SensorTrace& trace);

// Dataset directory helpers. Trace files are named `<case letter>_<sample_id>.csv`.
struct TraceFileRef {
  CaseLabel label;
  std::uint32_t sample_id;
  std::filesystem::path path;
};

std::string trace_file_name(CaseLabel label, std::uint32_t sample_id);
std::optional<TraceFileRef> parse_trace_file_name(const std::filesystem::path& path);

// Sorted by (case, sample_id). Files not matching the naming scheme are skipped.
std::vector<TraceFileRef> list_trace_files(const std::filesystem::path& dir);

RawTrace read_trace_file(const TraceFileRef& ref);

}  // namespace slip
