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
#include <cstddef>
#include <optional>
#include <string_view>

namespace slip {

/// The six handling scenarios. The enumerator order is the label order used
/// everywhere (row grouping, pair enumeration AB..EF).
enum class CaseLabel : int {
  NormalTouchKeep = 0,       // A
  AccidentalKeep = 1,        // B
  CompleteSlip = 2,          // C
  SlipTillTippingPoint = 3,  // D
  Flip = 4,                  // E
  Fall = 5,                  // F
};

inline constexpr std::size_t kNumCases = 6;

inline constexpr std::array<CaseLabel, kNumCases> kAllCases = {
    CaseLabel::NormalTouchKeep, CaseLabel::AccidentalKeep,
    CaseLabel::CompleteSlip,    CaseLabel::SlipTillTippingPoint,
    CaseLabel::Flip,            CaseLabel::Fall};

constexpr std::size_t case_index(CaseLabel c) { return static_cast<std::size_t>(c); }

constexpr char case_letter(CaseLabel c) { return static_cast<char>('A' + case_index(c)); }

constexpr std::optional<CaseLabel> case_from_letter(char letter) {
  if (letter < 'A' || letter > 'F') return std::nullopt;
  return static_cast<CaseLabel>(letter - 'A');
}

std::string_view case_name(CaseLabel c);

}  // namespace slip
