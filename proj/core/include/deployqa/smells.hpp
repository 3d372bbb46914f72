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
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deployqa/catalog.hpp"
#include "deployqa/finding.hpp"
#include "deployqa/model.hpp"

namespace dqa {

class InvalidOverride : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Catalog plus per-run configuration for the smell rules.
class RuleContext {
 public:
  explicit RuleContext(const Catalog& catalog);

  /// Overrides a detection parameter; the entry must declare it.
  void set_parameter(const std::string& rule_id, const std::string& name, nlohmann::json value);
  void disable(const std::string& rule_id);

  const Catalog& catalog() const { return *catalog_; }
  bool enabled(const std::string& rule_id) const { return disabled_.count(rule_id) == 0; }
  const std::set<std::string>& disabled() const { return disabled_; }
  /// Effective parameters of an entry: catalog values with overrides applied.
  nlohmann::json parameters(const DefectEntry& entry) const;

 private:
  const Catalog* catalog_;
  std::map<std::string, nlohmann::json> overrides_;
  std::set<std::string> disabled_;
};

/// Runs every enabled ansible-targeted entry over one playbook. Comments are
/// read from the playbook's parsed document.
std::vector<Finding> detect_playbook_smells(const PlaybookModel& playbook, const RuleContext& ctx);

/// Runs every enabled tosca-targeted smell entry over node properties and
/// input defaults.
std::vector<Finding> detect_topology_smells(const TopologyModel& topology, const RuleContext& ctx);

Category category_of(const Finding& finding, const Catalog& catalog);

/// Module name without the ansible.builtin / ansible.legacy prefix.
std::string short_module_name(std::string_view module);

}  // namespace dqa
