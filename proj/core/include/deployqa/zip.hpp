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

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dqa::zip {

class ZipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool looks_like_zip(std::string_view bytes);

/// Extracts every regular file of a zip archive (stored or deflated
/// entries). Directory entries are skipped; paths use '/' separators.
std::map<std::string, std::string> read_archive(std::string_view bytes);

/// Writes an archive with stored (uncompressed) entries.
std::string write_archive(const std::map<std::string, std::string>& files);

}  // namespace dqa::zip
