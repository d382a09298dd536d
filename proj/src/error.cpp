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

#include "slip/error.hpp"

#include "slip/case_label.hpp"

namespace slip {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::DuplicateSample: return "DuplicateSample";
    case ErrorCode::EmptyFitSet: return "EmptyFitSet";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::SingleClassTraining: return "SingleClassTraining";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::InsufficientClassRows: return "InsufficientClassRows";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(message), code_(code), line_(line) {}

std::string_view case_name(CaseLabel c) {
  switch (c) {
    case CaseLabel::NormalTouchKeep: return "normal touch keep";
    case CaseLabel::AccidentalKeep: return "accidental keep";
    case CaseLabel::CompleteSlip: return "complete slip";
    case CaseLabel::SlipTillTippingPoint: return "slip till tipping point";
    case CaseLabel::Flip: return "flip";
    case CaseLabel::Fall: return "fall";
  }
  return "unknown";
}

}  // namespace slip
