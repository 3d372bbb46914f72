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

#include <filesystem>
#include <map>
#include <string>

namespace dqa::testing {

/// Absolute path of a file or directory below tests/fixtures.
std::filesystem::path fixture(const std::string& relative);

/// Fresh, empty scratch directory unique to \p name.
std::filesystem::path scratch_dir(const std::string& name);

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

/// Writes every (relative path, contents) pair below \p root.
void write_tree(const std::filesystem::path& root, const std::map<std::string, std::string>& files);

}  // namespace dqa::testing
