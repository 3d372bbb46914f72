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
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "deployqa/csar.hpp"
#include "deployqa/fix.hpp"
#include "deployqa/petri.hpp"
#include "deployqa/report.hpp"
#include "deployqa/smells.hpp"

namespace dqa {

struct CheckOptions {
  std::size_t max_markings = kDefaultMaxMarkings;
  bool record_timings = false;
};

/// Runs every analysis over a loaded package: topology verification, the
/// workflow net, smells and performance goals. Findings of disabled rules are
/// dropped. When the state space exceeds the marking limit the report is
/// flagged incomplete and no workflow verdicts are emitted.
Report run_check(const CsarArchive& archive, const RuleContext& ctx, const CheckOptions& options = {},
                 const std::string& input_label = {});

/// Loads \p path with load_input and analyzes it; the load time is recorded
/// as the first stage.
Report run_check(const std::filesystem::path& path, const RuleContext& ctx, const CheckOptions& options = {});

struct FixRun {
  std::vector<FileFixes> files;  // one per affected file, path order
  std::size_t patch_count() const;
  std::size_t advice_count() const;
};

/// Plans fixes for the findings of \p report. When \p rules is non-empty
/// only those rules are considered.
FixRun plan_fixes(const CsarArchive& archive, const Report& report, const Catalog& catalog,
                  const std::set<std::string>& rules = {});

class ApplyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes every non-empty patch below \p root. Each file's current content
/// must still match the patch digest (FixError StaleSource otherwise). All
/// new contents go to temporary files first and are renamed into place
/// only once every temporary file has been written.
void apply_fixes(const std::filesystem::path& root, const FixRun& run);

nlohmann::json to_json(const FixRun& run);

}  // namespace dqa
