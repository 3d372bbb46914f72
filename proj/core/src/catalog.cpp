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

#include "deployqa/catalog.hpp"

#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "deployqa/yaml.hpp"
#include "deployqa/yaml_json.hpp"

namespace dqa {

namespace resources {
extern const std::string_view builtin_catalog;
}

std::string_view to_string(DefectClass v) {
  switch (v) {
    case DefectClass::Error: return "error";
    case DefectClass::Smell: return "smell";
    case DefectClass::Bug: return "bug";
  }
  return "?";
}

std::string_view to_string(Category v) {
  switch (v) {
    case Category::Implementation: return "implementation";
    case Category::Design: return "design";
    case Category::Security: return "security";
  }
  return "?";
}

std::string_view to_string(Target v) {
  switch (v) {
    case Target::Tosca: return "tosca";
    case Target::Ansible: return "ansible";
    case Target::Workflow: return "workflow";
    case Target::Perf: return "perf";
  }
  return "?";
}

std::string_view to_string(Severity v) {
  switch (v) {
    case Severity::Info: return "info";
    case Severity::Low: return "low";
    case Severity::Medium: return "medium";
    case Severity::High: return "high";
    case Severity::Error: return "error";
  }
  return "?";
}

std::optional<DefectClass> defect_class_from(std::string_view s) {
  for (auto v : {DefectClass::Error, DefectClass::Smell, DefectClass::Bug}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Category> category_from(std::string_view s) {
  for (auto v : {Category::Implementation, Category::Design, Category::Security}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Target> target_from(std::string_view s) {
  for (auto v : {Target::Tosca, Target::Ansible, Target::Workflow, Target::Perf}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::optional<Severity> severity_from(std::string_view s) {
  for (auto v : {Severity::Info, Severity::Low, Severity::Medium, Severity::High, Severity::Error}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::string_view to_string(Directive::Op op) {
  switch (op) {
    case Directive::Op::SetKey: return "set_key";
    case Directive::Op::RemoveKey: return "remove_key";
    case Directive::Op::InsertSibling: return "insert_sibling";
    case Directive::Op::RenameKey: return "rename_key";
  }
  return "?";
}

std::string_view to_string(CatalogError::Kind kind) {
  switch (kind) {
    case CatalogError::Kind::MissingField: return "MissingField";
    case CatalogError::Kind::BadId: return "BadId";
    case CatalogError::Kind::DuplicateId: return "DuplicateId";
    case CatalogError::Kind::UnknownClass: return "UnknownClass";
    case CatalogError::Kind::UnknownCategory: return "UnknownCategory";
    case CatalogError::Kind::UnknownTarget: return "UnknownTarget";
    case CatalogError::Kind::UnknownSeverity: return "UnknownSeverity";
    case CatalogError::Kind::ClassSeverityMismatch: return "ClassSeverityMismatch";
    case CatalogError::Kind::UnknownDetector: return "UnknownDetector";
    case CatalogError::Kind::AutoFixMismatch: return "AutoFixMismatch";
    case CatalogError::Kind::DanglingParameter: return "DanglingParameter";
    case CatalogError::Kind::BadDirective: return "BadDirective";
  }
  return "?";
}

CatalogLoadError::CatalogLoadError(Kind kind, const std::string& message,
                                   std::vector<CatalogError> violations)
    : std::runtime_error(message), kind_(kind), violations_(std::move(violations)) {}

bool DefectEntry::has_target(Target t) const {
  for (auto x : targets) {
    if (x == t) return true;
  }
  return false;
}

const DefectEntry* Catalog::find(std::string_view rule_id) const {
  for (const auto& e : entries) {
    if (e.rule_id == rule_id) return &e;
  }
  return nullptr;
}

const std::vector<std::string>& known_detectors() {
  static const std::vector<std::string> kDetectors = {
      "secret_literal",       "empty_password",     "admin_account",     "unrestricted_bind",
      "plain_http",           "suspicious_comment", "unchecked_download", "weak_crypto",
      "unnamed_task",         "command_module",     "ignore_errors",     "deprecated_module",
      "boolean_comparison",   "long_play",          "duplicate_task",    "monolithic_playbook",
      "god_node",             "dangling_requirement", "capability_mismatch", "undefined_type",
      "type_cycle",           "missing_property",   "constraint_violation", "dependency_cycle",
      "duplicate_template",   "workflow_deadlock",  "dead_transition",   "performance_goal"};
  return kDetectors;
}

std::vector<std::string> template_placeholders(std::string_view text) {
  static const std::regex kPlaceholder(R"(\$\{([A-Za-z_][A-Za-z0-9_]*)\})");
  std::vector<std::string> out;
  std::string s(text);
  for (auto it = std::sregex_iterator(s.begin(), s.end(), kPlaceholder); it != std::sregex_iterator();
       ++it) {
    out.push_back((*it)[1].str());
  }
  return out;
}

namespace {

using yaml::Node;

struct Parsed {
  Catalog catalog;
  std::vector<CatalogError> errors;
};

[[noreturn]] void syntax(const std::string& file, const Node& at, const std::string& msg) {
  throw CatalogLoadError(CatalogLoadError::Kind::Syntax,
                         file + ":" + std::to_string(at.range.start.line) + ":" +
                             std::to_string(at.range.start.col) + ": " + msg);
}

std::string text_of(const Node* n) { return n && n->is_scalar() && !n->is_null() ? n->text : ""; }

std::vector<std::string> string_list(const std::string& file, const Node* n, const char* what) {
  std::vector<std::string> out;
  if (!n || n->is_null()) return out;
  if (n->is_scalar()) {
    out.push_back(n->text);
  } else if (n->is_seq()) {
    for (std::size_t i = 0; i < n->size(); ++i) out.push_back(n->item(i).text);
  } else {
    syntax(file, *n, std::string(what) + " must be a list");
  }
  return out;
}

std::vector<Directive> read_template(const std::string& file, const Node& n,
                                     const std::string& rule_id, std::vector<CatalogError>& errors) {
  if (!n.is_seq()) syntax(file, n, "template must be a list of directives");
  std::vector<Directive> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node& d = n.item(i);
    if (!d.is_map() || d.size() != 1) syntax(file, d, "directive must be a single-key mapping");
    Directive dir;
    const std::string& op = d.key(0).text;
    const Node& args = d.value(0);
    if (!args.is_map()) syntax(file, args, "directive arguments must be a mapping");
    dir.path = text_of(args.find("path"));
    if (op == "set_key") {
      dir.op = Directive::Op::SetKey;
      dir.value = text_of(args.find("value"));
      if (const Node* raw = args.find("raw")) dir.raw = raw->as_bool().value_or(false);
    } else if (op == "remove_key") {
      dir.op = Directive::Op::RemoveKey;
    } else if (op == "rename_key") {
      dir.op = Directive::Op::RenameKey;
      dir.value = text_of(args.find("new"));
    } else if (op == "insert_sibling") {
      dir.op = Directive::Op::InsertSibling;
      dir.value = text_of(args.find("node"));
    } else {
      errors.push_back({CatalogError::Kind::BadDirective, rule_id, "unknown directive '" + op + "'"});
      continue;
    }
    out.push_back(std::move(dir));
  }
  return out;
}

Parsed parse(std::string_view text, const std::string& file) {
  yaml::Document doc;
  try {
    doc = yaml::parse(text, file);
  } catch (const yaml::ParseError& e) {
    throw CatalogLoadError(CatalogLoadError::Kind::Syntax, e.what());
  }
  Parsed out;
  const Node& root = doc.root;
  if (!root.is_map()) syntax(file, root, "catalog root must be a mapping");
  out.catalog.version = text_of(root.find("version"));
  const Node* rules = root.find("rules");
  if (!rules || !rules->is_seq()) syntax(file, rules ? *rules : root, "'rules' must be a list");

  auto& errors = out.errors;
  for (std::size_t i = 0; i < rules->size(); ++i) {
    const Node& r = rules->item(i);
    if (!r.is_map()) syntax(file, r, "rule must be a mapping");
    DefectEntry e;
    e.rule_id = text_of(r.find("id"));
    if (e.rule_id.empty()) {
      errors.push_back({CatalogError::Kind::MissingField, "", "rule #" + std::to_string(i) + " has no id"});
    }
    auto req = [&](const char* key) {
      std::string v = text_of(r.find(key));
      if (v.empty()) {
        errors.push_back({CatalogError::Kind::MissingField, e.rule_id, std::string("missing '") + key + "'"});
      }
      return v;
    };
    std::string cls = req("class");
    if (auto v = defect_class_from(cls)) {
      e.cls = *v;
    } else if (!cls.empty()) {
      errors.push_back({CatalogError::Kind::UnknownClass, e.rule_id, "unknown class '" + cls + "'"});
    }
    std::string cat = req("category");
    if (auto v = category_from(cat)) {
      e.category = *v;
    } else if (!cat.empty()) {
      errors.push_back({CatalogError::Kind::UnknownCategory, e.rule_id, "unknown category '" + cat + "'"});
    }
    std::string sev = req("severity");
    if (auto v = severity_from(sev)) {
      e.severity = *v;
    } else if (!sev.empty()) {
      errors.push_back({CatalogError::Kind::UnknownSeverity, e.rule_id, "unknown severity '" + sev + "'"});
    }
    for (const auto& t : string_list(file, r.find("targets"), "targets")) {
      if (auto v = target_from(t)) {
        e.targets.push_back(*v);
      } else {
        errors.push_back({CatalogError::Kind::UnknownTarget, e.rule_id, "unknown target '" + t + "'"});
      }
    }
    e.title = text_of(r.find("title"));
    e.description = text_of(r.find("description"));
    if (const Node* det = r.find("detection"); det && det->is_map()) {
      e.detection.rule = text_of(det->find("rule"));
      if (const Node* params = det->find("parameters"); params && !params->is_null()) {
        if (!params->is_map()) syntax(file, *params, "detection parameters must be a mapping");
        e.detection.parameters = to_json(*params);
      }
    } else {
      errors.push_back({CatalogError::Kind::MissingField, e.rule_id, "missing 'detection'"});
    }
    if (const Node* res = r.find("resolutions"); res && !res->is_null()) {
      if (!res->is_seq()) syntax(file, *res, "resolutions must be a list");
      for (std::size_t j = 0; j < res->size(); ++j) {
        const Node& rn = res->item(j);
        if (!rn.is_map()) syntax(file, rn, "resolution must be a mapping");
        Resolution rs;
        rs.id = text_of(rn.find("id"));
        rs.description = text_of(rn.find("description"));
        if (const Node* af = rn.find("auto_fixable")) rs.auto_fixable = af->as_bool().value_or(false);
        for (const auto& t : string_list(file, rn.find("applies_to"), "applies_to")) {
          if (auto v = target_from(t)) {
            rs.applies_to.push_back(*v);
          } else {
            errors.push_back({CatalogError::Kind::UnknownTarget, e.rule_id, "unknown target '" + t + "'"});
          }
        }
        if (const Node* ps = rn.find("parameters"); ps && !ps->is_null()) {
          if (!ps->is_seq()) syntax(file, *ps, "parameters must be a list");
          for (std::size_t k = 0; k < ps->size(); ++k) {
            const Node& pn = ps->item(k);
            if (!pn.is_map()) syntax(file, pn, "parameter must be a mapping");
            ParamDecl p;
            p.name = text_of(pn.find("name"));
            if (std::string kind = text_of(pn.find("kind")); !kind.empty()) p.kind = kind;
            if (const Node* d = pn.find("default"); d && !d->is_null()) p.default_value = d->text;
            rs.parameters.push_back(std::move(p));
          }
        }
        if (const Node* tpl = rn.find("template"); tpl && !tpl->is_null()) {
          rs.fix_template = read_template(file, *tpl, e.rule_id, errors);
        }
        e.resolutions.push_back(std::move(rs));
      }
    }
    out.catalog.entries.push_back(std::move(e));
  }
  return out;
}

nlohmann::ordered_json ordered(const nlohmann::json& j) {
  return nlohmann::ordered_json::parse(j.dump());
}

}  // namespace

std::vector<CatalogError> validate_catalog(const Catalog& catalog) {
  static const std::regex kId("[EISWDP][0-9]{3}[a-z]?");
  const auto& detectors = known_detectors();
  std::vector<CatalogError> errors;
  std::set<std::string> seen;
  for (const auto& e : catalog.entries) {
    if (!std::regex_match(e.rule_id, kId)) {
      errors.push_back({CatalogError::Kind::BadId, e.rule_id, "rule id '" + e.rule_id + "' is malformed"});
    }
    if (!seen.insert(e.rule_id).second) {
      errors.push_back({CatalogError::Kind::DuplicateId, e.rule_id, "duplicate rule id " + e.rule_id});
    }
    if (e.cls == DefectClass::Error && e.severity != Severity::Error) {
      errors.push_back({CatalogError::Kind::ClassSeverityMismatch, e.rule_id,
                        "class error requires severity error"});
    }
    if (e.targets.empty()) {
      errors.push_back({CatalogError::Kind::MissingField, e.rule_id, "no targets"});
    }
    if (std::find(detectors.begin(), detectors.end(), e.detection.rule) == detectors.end()) {
      errors.push_back({CatalogError::Kind::UnknownDetector, e.rule_id,
                        "unknown detector '" + e.detection.rule + "'"});
    }
    for (const auto& r : e.resolutions) {
      if (r.auto_fixable != r.fix_template.has_value()) {
        errors.push_back({CatalogError::Kind::AutoFixMismatch, e.rule_id,
                          r.id + ": auto_fixable must be set exactly when a template is present"});
      }
      if (!r.fix_template) continue;
      std::set<std::string> declared;
      for (const auto& p : r.parameters) declared.insert(p.name);
      for (const auto& d : *r.fix_template) {
        for (const auto& text : {d.path, d.value}) {
          for (const auto& name : template_placeholders(text)) {
            if (!declared.count(name)) {
              errors.push_back({CatalogError::Kind::DanglingParameter, e.rule_id,
                                r.id + ": template uses undeclared parameter {" + name + "}"});
            }
          }
        }
      }
    }
  }
  return errors;
}

Catalog parse_catalog(std::string_view text, const std::string& file) {
  Parsed p = parse(text, file);
  auto more = validate_catalog(p.catalog);
  p.errors.insert(p.errors.end(), more.begin(), more.end());
  if (!p.errors.empty()) {
    std::string msg = file + ": invalid catalog:";
    for (const auto& e : p.errors) {
      msg += "\n  " + std::string(to_string(e.kind)) + (e.rule_id.empty() ? "" : " [" + e.rule_id + "]") +
             ": " + e.message;
    }
    throw CatalogLoadError(CatalogLoadError::Kind::Invalid, msg, std::move(p.errors));
  }
  return std::move(p.catalog);
}

std::string_view builtin_catalog_text() { return resources::builtin_catalog; }

const Catalog& builtin_catalog() {
  static const Catalog kCatalog = parse_catalog(resources::builtin_catalog, "<builtin>");
  return kCatalog;
}

Catalog load_catalog(const std::optional<std::filesystem::path>& path) {
  if (!path) return builtin_catalog();
  std::ifstream in(*path, std::ios::binary);
  if (!in) {
    throw CatalogLoadError(CatalogLoadError::Kind::Syntax, "cannot read catalog " + path->string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str(), path->generic_string());
}

std::string serialize_catalog(const Catalog& catalog) {
  nlohmann::ordered_json root;
  root["version"] = catalog.version;
  auto rules = nlohmann::ordered_json::array();
  for (const auto& e : catalog.entries) {
    nlohmann::ordered_json r;
    r["id"] = e.rule_id;
    r["class"] = to_string(e.cls);
    r["category"] = to_string(e.category);
    auto targets = nlohmann::ordered_json::array();
    for (auto t : e.targets) targets.push_back(to_string(t));
    r["targets"] = targets;
    r["severity"] = to_string(e.severity);
    r["title"] = e.title;
    r["description"] = e.description;
    nlohmann::ordered_json det;
    det["rule"] = e.detection.rule;
    if (!e.detection.parameters.empty()) det["parameters"] = ordered(e.detection.parameters);
    r["detection"] = det;
    if (!e.resolutions.empty()) {
      auto res = nlohmann::ordered_json::array();
      for (const auto& rs : e.resolutions) {
        nlohmann::ordered_json o;
        o["id"] = rs.id;
        o["description"] = rs.description;
        o["auto_fixable"] = rs.auto_fixable;
        if (!rs.applies_to.empty()) {
          auto at = nlohmann::ordered_json::array();
          for (auto t : rs.applies_to) at.push_back(to_string(t));
          o["applies_to"] = at;
        }
        if (!rs.parameters.empty()) {
          auto ps = nlohmann::ordered_json::array();
          for (const auto& p : rs.parameters) {
            nlohmann::ordered_json pj;
            pj["name"] = p.name;
            pj["kind"] = p.kind;
            if (p.default_value) pj["default"] = *p.default_value;
            ps.push_back(pj);
          }
          o["parameters"] = ps;
        }
        if (rs.fix_template) {
          auto tpl = nlohmann::ordered_json::array();
          for (const auto& d : *rs.fix_template) {
            nlohmann::ordered_json args;
            args["path"] = d.path;
            switch (d.op) {
              case Directive::Op::SetKey:
                args["value"] = d.value;
                if (d.raw) args["raw"] = true;
                break;
              case Directive::Op::RenameKey: args["new"] = d.value; break;
              case Directive::Op::InsertSibling: args["node"] = d.value; break;
              case Directive::Op::RemoveKey: break;
            }
            nlohmann::ordered_json dj;
            dj[std::string(to_string(d.op))] = args;
            tpl.push_back(dj);
          }
          o["template"] = tpl;
        }
        res.push_back(o);
      }
      r["resolutions"] = res;
    }
    rules.push_back(r);
  }
  root["rules"] = rules;
  return emit_yaml(root);
}

std::vector<Resolution> lookup_resolutions(const Catalog& catalog, std::string_view rule_id) {
  const DefectEntry* e = catalog.find(rule_id);
  return e ? e->resolutions : std::vector<Resolution>{};
}

}  // namespace dqa
