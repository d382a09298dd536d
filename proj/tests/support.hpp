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

#include <doctest.h>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "slip/error.hpp"

namespace testing {

// Runs fn and returns the code of the slip::Error it throws, if any.
inline std::optional<slip::ErrorCode> error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const slip::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline std::size_t error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const slip::Error& e) {
    return e.line();
  }
  return 0;
}

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("slipdetect_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
