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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deployqa/model.hpp"
#include "deployqa/source.hpp"

namespace dqa {

class LoadError : public std::runtime_error {
 public:
  enum class Kind {
    NotAnArchive,
    MissingEntryBlueprint,
    MetadataMalformed,
    YamlSyntax,
    SchemaShape,
    Io,
  };

  LoadError(Kind kind, SourceSpan span, const std::string& message);
  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

std::string_view to_string(LoadError::Kind kind);

/// A loaded package: raw file contents plus the models parsed from them.
struct CsarArchive {
  std::string root;  // the path the package was loaded from
  bool zipped = false;
  std::string entry_blueprint;  // relative path, empty for playbook-only input
  std::map<std::string, std::string> metadata;
  std::vector<ArtifactRef> iac_artifacts;  // sorted by path
  std::optional<std::string> perf_goals;   // relative path of goals.yaml
  std::map<std::string, std::string> files;

  TopologyModel topology;
  std::map<std::string, PlaybookModel> playbooks;  // keyed by relative path
  /// node template name -> playbook paths bound through its artifacts
  std::map<std::string, std::vector<std::string>> node_playbooks;
};

/// Loads a zip archive or an exploded directory.
CsarArchive load_csar(const std::filesystem::path& path);

/// Like load_csar, but additionally accepts a single blueprint or playbook.
CsarArchive load_input(const std::filesystem::path& path);

/// Builds an archive from in-memory files (paths relative to the root).
CsarArchive load_csar_files(std::map<std::string, std::string> files, std::string root);

/// Parses TOSCA-Metadata/TOSCA.meta "key: value" lines.
std::map<std::string, std::string> parse_tosca_meta(std::string_view text,
                                                    const std::string& file);

TopologyModel parse_tosca(std::string_view text, const std::string& file = "");
PlaybookModel parse_playbook(std::string_view text, const std::string& file = "");

/// Task keys that are never taken as the module name.
bool is_task_keyword(std::string_view key);

}  // namespace dqa
