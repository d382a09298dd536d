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

#include <filesystem>
#include <string>

#include "slip/eval.hpp"
#include "slip/trace.hpp"

namespace slip {

// Two stacked panels (acceleration, orientation) against time.
std::string trace_svg(const SensorTrace& trace);

// Grouped bars: one group per case pair, one bar per evaluated network.
// Throws Error{InvalidArgument} when no column was evaluated.
std::string table_svg(const PerformanceTable& table);

void render_plot(const SensorTrace& trace, const std::filesystem::path& destination);
void render_plot(const PerformanceTable& table, const std::filesystem::path& destination);

}  // namespace slip
