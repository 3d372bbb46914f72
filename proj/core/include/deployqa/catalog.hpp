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

#include <nlohmann/json.hpp>

// The defect/resolution knowledge base: which defects exist, how they are
// classified, which detector finds them and how they can be fixed.
namespace dqa {

enum class DefectClass { Error, Smell, Bug };
enum class Category { Implementation, Design, Security };
enum class Target { Tosca, Ansible, Workflow, Perf };
/// Ordered from least to most severe.
enum class Severity { Info, Low, Medium, High, Error };

std::string_view to_string(DefectClass v);
std::string_view to_string(Category v);
std::string_view to_string(Target v);
std::string_view to_string(Severity v);
std::optional<DefectClass> defect_class_from(std::string_view s);
std::optional<Category> category_from(std::string_view s);
std::optional<Target> target_from(std::string_view s);
std::optional<Severity> severity_from(std::string_view s);

struct ParamDecl {
  std::string name;
  std::string kind = "string";  // string|integer|float|boolean|list|map
  std::optional<std::string> default_value;

  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

/// One edit directive of a fix template. Paths are YAML pointers relative to
/// the finding's subject; "" addresses the subject itself.
struct Directive {
  enum class Op { SetKey, RemoveKey, InsertSibling, RenameKey };
  Op op = Op::SetKey;
  std::string path;
  std::string value;  // value template, new key name or node template
  bool raw = false;   // set_key: insert the value as YAML text, unquoted

  friend bool operator==(const Directive&, const Directive&) = default;
};

std::string_view to_string(Directive::Op op);

struct Resolution {
  std::string id;
  std::string description;
  bool auto_fixable = false;
  std::optional<std::vector<Directive>> fix_template;
  std::vector<ParamDecl> parameters;
  std::vector<Target> applies_to;  // empty: every target of the entry

  friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct Detection {
  std::string rule;  // name of a built-in detector
  nlohmann::json parameters = nlohmann::json::object();

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct DefectEntry {
  std::string rule_id;
  DefectClass cls = DefectClass::Smell;
  Category category = Category::Implementation;
  std::vector<Target> targets;
  Severity severity = Severity::Medium;
  std::string title;
  std::string description;
  Detection detection;
  std::vector<Resolution> resolutions;

  bool has_target(Target t) const;
  friend bool operator==(const DefectEntry&, const DefectEntry&) = default;
};

struct Catalog {
  std::string version;
  std::vector<DefectEntry> entries;  // catalog order

  const DefectEntry* find(std::string_view rule_id) const;
  friend bool operator==(const Catalog&, const Catalog&) = default;
};

struct CatalogError {
  enum class Kind {
    MissingField,
    BadId,
    DuplicateId,
    UnknownClass,
    UnknownCategory,
    UnknownTarget,
    UnknownSeverity,
    ClassSeverityMismatch,
    UnknownDetector,
    AutoFixMismatch,
    DanglingParameter,
    BadDirective,
  };
  Kind kind;
  std::string rule_id;
  std::string message;
};

std::string_view to_string(CatalogError::Kind kind);

class CatalogLoadError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Invalid };
  CatalogLoadError(Kind kind, const std::string& message, std::vector<CatalogError> violations = {});
  Kind kind() const { return kind_; }
  const std::vector<CatalogError>& violations() const { return violations_; }

 private:
  Kind kind_;
  std::vector<CatalogError> violations_;
};

/// The catalog compiled into the library.
const Catalog& builtin_catalog();
std::string_view builtin_catalog_text();

/// Loads and validates a catalog file; the built-in catalog when absent.
Catalog load_catalog(const std::optional<std::filesystem::path>& path);
Catalog parse_catalog(std::string_view text, const std::string& file = "catalog.yaml");

/// Empty iff the catalog is valid.
std::vector<CatalogError> validate_catalog(const Catalog& catalog);

std::string serialize_catalog(const Catalog& catalog);

/// Resolutions of a rule in catalog order; empty for unknown rules.
std::vector<Resolution> lookup_resolutions(const Catalog& catalog, std::string_view rule_id);

/// Names of every detector compiled into the library.
const std::vector<std::string>& known_detectors();

/// "${name}" placeholders used by a template string, in order of appearance.
std::vector<std::string> template_placeholders(std::string_view text);

}  // namespace dqa
