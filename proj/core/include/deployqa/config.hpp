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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "deployqa/catalog.hpp"
#include "deployqa/smells.hpp"

namespace dqa {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string file, std::size_t line, const std::string& message);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Contents of a qa.yaml file. Every field is optional so that command-line
/// flags and built-in defaults can fill the gaps.
struct Config {
  std::string source;  // file the values were read from, empty if none
  std::optional<std::filesystem::path> catalog;  // resolved against source
  std::optional<Severity> severity_threshold;
  std::optional<std::size_t> max_markings;
  std::set<std::string> disabled_rules;
  std::map<std::string, std::map<std::string, nlohmann::json>> rule_parameters;
};

inline constexpr std::string_view kConfigFileName = "qa.yaml";

Config parse_config(std::string_view text, const std::string& file = std::string(kConfigFileName));
Config load_config(const std::filesystem::path& path);

/// Looks for qa.yaml in \p dir; returns an empty Config when absent.
Config discover_config(const std::filesystem::path& dir);

/// Applies rule overrides and disabled rules. Unknown rules raise
/// UnknownRule, bad parameters raise InvalidOverride.
void apply_config(const Config& config, RuleContext& ctx);

}  // namespace dqa
