// Copyright 2026 The DeployQA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "deployqa/yaml.hpp"

namespace dqa {

/// Location of an IR element or finding inside a file of the analyzed
/// package. Offsets are bytes; line and column are 1-based.
struct SourceSpan {
  std::string file;
  std::size_t start_byte = 0;
  std::size_t end_byte = 0;
  std::size_t start_line = 1;
  std::size_t start_col = 1;

  static SourceSpan of(const std::string& file, const yaml::Range& r);
  static SourceSpan at_start(const std::string& file);

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Lowercase hex SHA-256 of \p data.
std::string sha256_hex(std::string_view data);

}  // namespace dqa
