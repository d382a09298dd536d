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

#include "slip/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "slip/error.hpp"
#include "slip/textio.hpp"

namespace slip {

std::vector<double> SensorTrace::accel_channel(std::size_t axis) const {
  std::vector<double> out(accel.size());
  for (std::size_t k = 0; k < accel.size(); ++k) out[k] = accel[k][axis];
  return out;
}

std::vector<double> SensorTrace::orient_channel(std::size_t axis) const {
  std::vector<double> out(orient.size());
  for (std::size_t k = 0; k < orient.size(); ++k) out[k] = orient[k][axis];
  return out;
}

namespace {

constexpr std::array<double, 3> kAnglePeriod = {360.0, 360.0, 180.0};

// Maps `deg` into [lo, lo + period).
double reduce_into(double deg, double lo, double period) {
  double r = std::fmod(deg - lo, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return lo + r;
}

}  // namespace

double wrap_azimuth(double deg) {
  if (deg >= 0.0 && deg < 360.0) return deg;
  double r = reduce_into(deg, 0.0, 360.0);
  return r >= 360.0 ? 0.0 : r;
}

double wrap_pitch(double deg) {
  if (deg >= -180.0 && deg <= 180.0) return deg;
  return reduce_into(deg, -180.0, 360.0);
}

double wrap_roll(double deg) {
  if (deg >= -90.0 && deg <= 90.0) return deg;
  return reduce_into(deg, -90.0, 180.0);
}

Vec3 wrap_orientation(const Vec3& orient) {
  return {wrap_azimuth(orient[0]), wrap_pitch(orient[1]), wrap_roll(orient[2])};
}

double angle_delta(std::size_t channel, double from, double to) {
  return std::remainder(to - from, kAnglePeriod.at(channel));
}

RawTrace parse_trace(std::istream& source, CaseLabel label, std::uint32_t sample_id) {
  RawTrace trace;
  trace.label = label;
  trace.sample_id = sample_id;

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line != kTraceHeader) {
        throw Error(ErrorCode::MalformedRow,
                    "line 1: expected header '" + std::string(kTraceHeader) + "'", line_no);
      }
      have_header = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const auto fields = split_fields(line);
    if (fields.size() != 7) {
      throw Error(ErrorCode::MalformedRow,
                  "line " + std::to_string(line_no) + ": expected 7 columns, got " +
                      std::to_string(fields.size()),
                  line_no);
    }
    std::array<double, 7> v{};
    for (std::size_t i = 0; i < 7; ++i) {
      auto parsed = parse_double(fields[i]);
      if (!parsed) {
        throw Error(ErrorCode::MalformedRow,
                    "line " + std::to_string(line_no) + ": cannot parse number '" +
                        std::string(fields[i]) + "'",
                    line_no);
      }
      v[i] = *parsed;
    }
    if (!trace.time_s.empty() && !(v[0] > trace.time_s.back())) {
      throw Error(ErrorCode::NonMonotonicTime,
                  "line " + std::to_string(line_no) + ": time does not increase", line_no);
    }
    trace.time_s.push_back(v[0]);
    trace.accel.push_back({v[1], v[2], v[3]});
    trace.orient.push_back(wrap_orientation({v[4], v[5], v[6]}));
  }
  if (!have_header) throw Error(ErrorCode::TooShort, "empty trace source");
  if (trace.size() < 2) {
    throw Error(ErrorCode::TooShort,
                "trace has " + std::to_string(trace.size()) + " rows, need at least 2");
  }
  return trace;
}

SensorTrace resample_window(const RawTrace& trace, double rate_hz, std::size_t length) {
  const std::size_t n = trace.size();
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw Error(ErrorCode::InvalidArgument, "resample rate must be positive");
  }
  if (length < 2) throw Error(ErrorCode::InvalidArgument, "resample length must be >= 2");
  if (n < 2 || trace.accel.size() != n || trace.orient.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "trace needs >= 2 samples with matching channels");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(trace.time_s[i] > trace.time_s[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "trace timing must be strictly increasing");
    }
  }

  SensorTrace out;
  out.label = trace.label;
  out.sample_id = trace.sample_id;
  out.sample_rate_hz = rate_hz;
  out.accel.resize(length);
  out.orient.resize(length);

  const double t0 = trace.time_s.front();
  std::size_t seg = 0;
  for (std::size_t k = 0; k < length; ++k) {
    const double t = t0 + static_cast<double>(k) / rate_hz;
    while (seg + 1 < n && trace.time_s[seg + 1] <= t) ++seg;
    if (seg + 1 == n) {
      out.accel[k] = trace.accel.back();
      out.orient[k] = trace.orient.back();
      continue;
    }
    const double frac = (t - trace.time_s[seg]) / (trace.time_s[seg + 1] - trace.time_s[seg]);
    for (std::size_t c = 0; c < 3; ++c) {
      const double a0 = trace.accel[seg][c];
      out.accel[k][c] = a0 + frac * (trace.accel[seg + 1][c] - a0);
      const double o0 = trace.orient[seg][c];
      out.orient[k][c] = o0 + frac * angle_delta(c, o0, trace.orient[seg + 1][c]);
    }
    out.orient[k] = wrap_orientation(out.orient[k]);
  }
  return out;
}

RawTrace to_raw(const SensorTrace& trace) {
  RawTrace raw;
  raw.label = trace.label;
  raw.sample_id = trace.sample_id;
  raw.accel = trace.accel;
  raw.orient = trace.orient;
  raw.time_s.resize(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) {
    raw.time_s[k] = static_cast<double>(k) / trace.sample_rate_hz;
  }
  return raw;
}

SensorTrace resample_window(const SensorTrace& trace, double rate_hz, std::size_t length) {
  return resample_window(to_raw(trace), rate_hz, length);
}

void write_trace(std::ostream& out, const SensorTrace& trace) {
  out << kTraceHeader << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_double(static_cast<double>(k) / trace.sample_rate_hz, 9);
    for (double v : trace.accel[k]) out << ',' << format_double(v, 9);
    for (double v : trace.orient[k]) out << ',' << format_double(v, 9);
    out << '\n';
  }
}

std::string format_trace(const SensorTrace& trace) {
  std::ostringstream ss;
  write_trace(ss, trace);
  return ss.str();
}

std::string trace_file_name(CaseLabel label, std::uint32_t sample_id) {
  return std::string(1, case_letter(label)) + "_" + std::to_string(sample_id) + ".csv";
}

std::optional<TraceFileRef> parse_trace_file_name(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  if (name.size() < 7 || name[1] != '_' || !name.ends_with(".csv")) return std::nullopt;
  auto label = case_from_letter(name[0]);
  if (!label) return std::nullopt;
  const std::string_view digits = std::string_view(name).substr(2, name.size() - 6);
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos) {
    return std::nullopt;
  }
  auto id = parse_u64(digits);
  if (!id || *id > 0xFFFFFFFFu) return std::nullopt;
  return TraceFileRef{*label, static_cast<std::uint32_t>(*id), path};
}

std::vector<TraceFileRef> list_trace_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::IoFailure, "not a directory: " + dir.string());
  }
  std::vector<TraceFileRef> refs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (auto ref = parse_trace_file_name(entry.path())) refs.push_back(std::move(*ref));
  }
  std::sort(refs.begin(), refs.end(), [](const TraceFileRef& a, const TraceFileRef& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.sample_id < b.sample_id;
  });
  return refs;
}

RawTrace read_trace_file(const TraceFileRef& ref) {
  std::ifstream in(ref.path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + ref.path.string());
  return parse_trace(in, ref.label, ref.sample_id);
}

}  // namespace slip
