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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deployqa/catalog.hpp"
#include "deployqa/finding.hpp"

namespace dqa {

class FixError : public std::runtime_error {
 public:
  enum class Kind { NotAutoFixable, StaleSource, TemplateError, OverlappingEdits };
  FixError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string_view to_string(FixError::Kind kind);

struct FixPlan {
  Finding finding;
  Resolution resolution;
  std::map<std::string, std::string> bindings;
  std::string target_file;
  /// Declared parameters without a value; the plan cannot be rendered
  /// until the caller binds them.
  std::vector<std::string> unbound;

  bool applicable() const { return resolution.auto_fixable && unbound.empty() && resolution.fix_template; }
};

struct Edit {
  std::size_t start_byte = 0;
  std::size_t end_byte = 0;
  std::string replacement;

  friend bool operator==(const Edit&, const Edit&) = default;
};

struct Patch {
  std::string file;
  std::vector<Edit> edits;  // sorted by start_byte, non-overlapping
  std::string base_digest;  // SHA-256 hex of the text the edits refer to

  friend bool operator==(const Patch&, const Patch&) = default;
};

/// One plan per resolution applicable to the finding's artifact kind, in
/// catalog order, with parameters bound from the finding where possible.
std::vector<FixPlan> recommend(const Finding& finding, const Catalog& catalog);

/// Binds a parameter by hand and refreshes the plan's unbound list.
void bind(FixPlan& plan, const std::string& name, std::string value);

/// Lowers the plan's template to edits on \p source. When \p expected_digest
/// is given it must match the source.
Patch render_patch(const FixPlan& plan, std::string_view source,
                   const std::optional<std::string>& expected_digest = std::nullopt);

/// Combines patches for the same file and base text into one.
Patch merge_patches(const std::vector<Patch>& patches);

std::string apply_patch(std::string_view source, const Patch& patch);

nlohmann::json to_json(const Patch& patch);
Patch patch_from_json(const nlohmann::json& j);

/// A finding without an applicable plan and the resolutions it offers.
struct Advice {
  Finding finding;
  std::vector<FixPlan> plans;
};

struct FileFixes {
  Patch patch;  // all applied plans merged
  std::vector<FixPlan> applied;
  std::vector<Advice> advice;
};

/// Renders the first applicable plan of every finding in one file and
/// merges the results. Findings must all refer to \p file.
FileFixes fix_file(const std::string& file, const std::vector<Finding>& findings, std::string_view source,
                   const Catalog& catalog, const std::optional<std::string>& expected_digest = std::nullopt);

/// Condition with literal boolean comparisons removed, "x == true" -> "x".
std::string simplify_condition(std::string_view condition);

}  // namespace dqa
