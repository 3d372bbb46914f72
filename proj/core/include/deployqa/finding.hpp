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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deployqa/catalog.hpp"
#include "deployqa/source.hpp"

namespace dqa {

/// One detected defect instance.
struct Finding {
  std::string rule_id;
  DefectClass cls = DefectClass::Smell;
  Category category = Category::Implementation;
  Severity severity = Severity::Medium;
  std::string message;
  SourceSpan span;
  /// Pointer to the offending element inside span.file, e.g.
  /// "/0/tasks/2/ignore_errors" or "/topology_template/node_templates/A".
  std::string subject;
  nlohmann::json data = nlohmann::json::object();

  friend bool operator==(const Finding&, const Finding&) = default;
};

class UnknownRule : public std::runtime_error {
 public:
  explicit UnknownRule(const std::string& rule_id)
      : std::runtime_error("rule " + rule_id + " is not in the catalog"), rule_id_(rule_id) {}
  const std::string& rule_id() const { return rule_id_; }

 private:
  std::string rule_id_;
};

/// Builds a finding whose classification is copied from the catalog entry.
Finding make_finding(const Catalog& catalog, std::string_view rule_id, std::string message,
                     SourceSpan span, std::string subject,
                     nlohmann::json data = nlohmann::json::object());

/// Sorts by (file, start_byte, rule_id) and keeps the first finding of every
/// (rule_id, file, subject) triple.
void sort_and_dedupe(std::vector<Finding>& findings);

nlohmann::json to_json(const Finding& finding);
Finding finding_from_json(const nlohmann::json& j);

}  // namespace dqa
