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

#include "slip/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "slip/error.hpp"
#include "slip/textio.hpp"

namespace slip {

namespace {

constexpr std::array<const char*, 4> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Panel {
  double left, top, width, height;
  double x_min, x_max, y_min, y_max;

  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * width; }
  double py(double y) const { return top + height - (y - y_min) / (y_max - y_min) * height; }
};

void draw_axes(std::ostringstream& svg, const Panel& p, const std::string& title,
               const std::string& x_label, const std::string& y_label, int x_ticks, int y_ticks) {
  svg << "<rect x=\"" << num(p.left) << "\" y=\"" << num(p.top) << "\" width=\"" << num(p.width)
      << "\" height=\"" << num(p.height) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  svg << "<text x=\"" << num(p.left + p.width / 2) << "\" y=\"" << num(p.top - 8)
      << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  svg << "<text class=\"axis-label\" x=\"" << num(p.left + p.width / 2) << "\" y=\""
      << num(p.top + p.height + 34) << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label
      << "</text>\n";
  svg << "<text class=\"axis-label\" x=\"" << num(p.left - 48) << "\" y=\""
      << num(p.top + p.height / 2) << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 "
      << num(p.left - 48) << ' ' << num(p.top + p.height / 2) << ")\">" << y_label << "</text>\n";
  for (int i = 0; i <= x_ticks && x_ticks > 0; ++i) {
    const double x = p.x_min + (p.x_max - p.x_min) * i / x_ticks;
    svg << "<text x=\"" << num(p.px(x)) << "\" y=\"" << num(p.top + p.height + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << num(x) << "</text>\n";
  }
  for (int i = 0; i <= y_ticks; ++i) {
    const double y = p.y_min + (p.y_max - p.y_min) * i / y_ticks;
    svg << "<line x1=\"" << num(p.left) << "\" y1=\"" << num(p.py(y)) << "\" x2=\""
        << num(p.left + p.width) << "\" y2=\"" << num(p.py(y))
        << "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
    svg << "<text x=\"" << num(p.left - 6) << "\" y=\"" << num(p.py(y) + 3)
        << "\" text-anchor=\"end\" font-size=\"10\">" << num(y) << "</text>\n";
  }
}

void draw_series(std::ostringstream& svg, const Panel& p, const SensorTrace& trace,
                 bool orientation, const std::array<const char*, 3>& names) {
  const auto& samples = orientation ? trace.orient : trace.accel;
  for (std::size_t c = 0; c < 3; ++c) {
    svg << "<polyline class=\"" << names[c] << "\" fill=\"none\" stroke=\"" << kColors[c]
        << "\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double t = static_cast<double>(k) / trace.sample_rate_hz;
      svg << (k ? " " : "") << num(p.px(t)) << ',' << num(p.py(samples[k][c]));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << num(p.left + p.width + 10) << "\" y=\"" << num(p.top + 14 + 16.0 * c)
        << "\" font-size=\"11\" fill=\"" << kColors[c] << "\">" << names[c] << "</text>\n";
  }
}

std::pair<double, double> padded_extent(const std::vector<Vec3>& samples) {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const auto& s : samples) {
    for (double v : s) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string trace_svg(const SensorTrace& trace) {
  if (trace.size() < 2 || trace.orient.size() != trace.size()) {
    throw Error(ErrorCode::InvalidArgument, "trace plot needs at least 2 samples");
  }
  const double duration = static_cast<double>(trace.size() - 1) / trace.sample_rate_hz;
  const auto [a_lo, a_hi] = padded_extent(trace.accel);
  const auto [o_lo, o_hi] = padded_extent(trace.orient);
  const Panel accel{70, 50, 620, 200, 0.0, duration, a_lo, a_hi};
  const Panel orient{70, 340, 620, 200, 0.0, duration, o_lo, o_hi};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  const std::string name = std::string(1, case_letter(trace.label)) + "_" +
                           std::to_string(trace.sample_id) + " (" +
                           std::string(case_name(trace.label)) + ")";
  draw_axes(svg, accel, "Acceleration " + name, "time (s)", "acceleration (m/s^2)", 8, 4);
  draw_series(svg, accel, trace, false, {"ax", "ay", "az"});
  draw_axes(svg, orient, "Orientation " + name, "time (s)", "angle (deg)", 8, 4);
  draw_series(svg, orient, trace, true, {"azimuth", "pitch", "roll"});
  svg << "</svg>\n";
  return svg.str();
}

std::string table_svg(const PerformanceTable& table) {
  if (!table.any_evaluated()) {
    throw Error(ErrorCode::InvalidArgument, "performance table is empty; nothing to plot");
  }
  std::vector<std::size_t> columns;
  for (std::size_t c = 0; c < kNumKinds; ++c) {
    if (table.evaluated[c]) columns.push_back(c);
  }
  const Panel p{70, 50, 840, 300, 0.0, static_cast<double>(kNumPairs), 0.0, 100.0};
  const double group = p.width / kNumPairs;
  const double bar = group * 0.8 / static_cast<double>(columns.size());

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"420\" "
         "viewBox=\"0 0 1000 420\" font-family=\"sans-serif\">\n";
  svg << "<rect width=\"1000\" height=\"420\" fill=\"white\"/>\n";
  draw_axes(svg, p, "Pairwise classification accuracy", "case pair", "accuracy (%)", 0, 5);
  for (std::size_t r = 0; r < kNumPairs; ++r) {
    const double gx = p.left + group * static_cast<double>(r) + group * 0.1;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      const double v = table.accuracy[r][columns[i]];
      const double x = gx + bar * static_cast<double>(i);
      svg << "<rect class=\"bar\" x=\"" << num(x) << "\" y=\"" << num(p.py(v)) << "\" width=\""
          << num(bar) << "\" height=\"" << num(p.py(0.0) - p.py(v)) << "\" fill=\""
          << kColors[columns[i]] << "\"><title>" << pair_name(all_pairs()[r]) << ' '
          << kind_display(kAllKinds[columns[i]]) << ": " << num(v) << "%</title></rect>\n";
    }
    svg << "<text x=\"" << num(gx + group * 0.4) << "\" y=\"" << num(p.top + p.height + 16)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << pair_name(all_pairs()[r]) << "</text>\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const double y = p.top + 14 + 16.0 * static_cast<double>(i);
    svg << "<rect x=\"" << num(p.left + p.width + 10) << "\" y=\"" << num(y - 9)
        << "\" width=\"10\" height=\"10\" fill=\"" << kColors[columns[i]] << "\"/>\n";
    svg << "<text x=\"" << num(p.left + p.width + 24) << "\" y=\"" << num(y)
        << "\" font-size=\"11\">" << kind_display(kAllKinds[columns[i]]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void render_plot(const SensorTrace& trace, const std::filesystem::path& destination) {
  write_file_atomic(destination, trace_svg(trace));
}

void render_plot(const PerformanceTable& table, const std::filesystem::path& destination) {
  write_file_atomic(destination, table_svg(table));
}

}  // namespace slip
