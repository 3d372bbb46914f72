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

#include "deployqa/config.hpp"

#include <fstream>
#include <sstream>

#include "deployqa/finding.hpp"
#include "deployqa/yaml.hpp"
#include "deployqa/yaml_json.hpp"

namespace dqa {

ConfigError::ConfigError(std::string file, std::size_t line, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
      file_(std::move(file)),
      line_(line) {}

namespace {

[[noreturn]] void fail(const std::string& file, const yaml::Node& at, const std::string& message) {
  throw ConfigError(file, at.range.start.line, message);
}

std::string scalar(const std::string& file, const yaml::Node& n, const std::string& what) {
  if (!n.is_scalar()) fail(file, n, what + " must be a scalar");
  return n.text;
}

}  // namespace

Config parse_config(std::string_view text, const std::string& file) {
  yaml::Document doc;
  try {
    doc = yaml::parse(text, file);
  } catch (const yaml::ParseError& e) {
    throw ConfigError(file, e.at().line, e.detail());
  }
  Config cfg;
  cfg.source = file;
  const yaml::Node& root = doc.root;
  if (root.is_null()) return cfg;
  if (!root.is_map()) fail(file, root, "configuration must be a mapping");

  std::filesystem::path base = std::filesystem::path(file).parent_path();
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string& key = root.key(i).text;
    const yaml::Node& v = root.value(i);
    if (key == "catalog") {
      std::filesystem::path p = scalar(file, v, "catalog");
      cfg.catalog = p.is_absolute() ? p : base / p;
    } else if (key == "severity_threshold") {
      auto s = severity_from(scalar(file, v, key));
      if (!s) fail(file, v, "unknown severity '" + v.text + "'");
      cfg.severity_threshold = s;
    } else if (key == "max_markings") {
      auto n = v.is_scalar() ? v.as_int() : std::nullopt;
      if (!n || *n <= 0) fail(file, v, "max_markings must be a positive integer");
      cfg.max_markings = static_cast<std::size_t>(*n);
    } else if (key == "disabled_rules") {
      if (!v.is_seq()) fail(file, v, "disabled_rules must be a list");
      for (const auto& item : v.children()) cfg.disabled_rules.insert(scalar(file, item, "rule id"));
    } else if (key == "rules") {
      if (!v.is_map()) fail(file, v, "rules must be a mapping of rule id to parameters");
      for (std::size_t r = 0; r < v.size(); ++r) {
        const std::string& rule = v.key(r).text;
        const yaml::Node& params = v.value(r);
        if (!params.is_map()) fail(file, params, "parameters of " + rule + " must be a mapping");
        auto& slot = cfg.rule_parameters[rule];
        for (std::size_t p = 0; p < params.size(); ++p) {
          slot[params.key(p).text] = to_json(params.value(p));
        }
      }
    } else {
      fail(file, root.key(i), "unknown configuration key '" + key + "'");
    }
  }
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.generic_string(), 0, "cannot read configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.generic_string());
}

Config discover_config(const std::filesystem::path& dir) {
  std::error_code ec;
  auto candidate = dir / std::string(kConfigFileName);
  if (std::filesystem::is_regular_file(candidate, ec)) return load_config(candidate);
  return {};
}

void apply_config(const Config& config, RuleContext& ctx) {
  for (const auto& rule : config.disabled_rules) {
    if (!ctx.catalog().find(rule)) throw UnknownRule(rule);
    ctx.disable(rule);
  }
  for (const auto& [rule, params] : config.rule_parameters) {
    for (const auto& [name, value] : params) ctx.set_parameter(rule, name, value);
  }
}

}  // namespace dqa
