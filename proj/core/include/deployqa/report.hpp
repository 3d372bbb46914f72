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
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deployqa/catalog.hpp"
#include "deployqa/finding.hpp"

namespace dqa {

std::string_view version();

struct StageTiming {
  std::string stage;
  double milliseconds = 0;
  friend bool operator==(const StageTiming&, const StageTiming&) = default;
};

struct Report {
  std::string tool_version;
  std::string input;         // path as given on the command line
  std::string input_digest;  // SHA-256 over the loaded files, see input_digest()
  bool complete = true;
  std::vector<std::string> incomplete_reasons;
  std::vector<Finding> findings;  // sorted and deduplicated
  std::vector<StageTiming> timings;

  friend bool operator==(const Report&, const Report&) = default;
};

struct SummaryRow {
  DefectClass cls;
  Category category;
  Severity severity;
  std::size_t count = 0;
};

/// Counts per (class, category, severity), in enum order, zero rows omitted.
std::vector<SummaryRow> summarize(const std::vector<Finding>& findings);

/// Digest of a file set: SHA-256 of "path\0sha256(content)\n" lines in path
/// order, so it does not depend on how the files were packaged.
std::string input_digest(const std::map<std::string, std::string>& files);

/// True when some finding has at least the given severity.
bool any_at_or_above(const std::vector<Finding>& findings, Severity threshold);

enum class ReportFormat { Text, Json, Sarif };

/// Report JSON. Timings are only emitted when \p with_timings is set, so the
/// body stays byte-identical across runs.
nlohmann::json to_json(const Report& report, bool with_timings = false);
Report report_from_json(const nlohmann::json& j);

nlohmann::json to_sarif(const Report& report, const Catalog& catalog);

std::string render_text(const Report& report);

std::string render(const Report& report, ReportFormat format, const Catalog& catalog,
                   bool with_timings = false);

}  // namespace dqa
