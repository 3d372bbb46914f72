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
#include "deployqa/csar.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include "deployqa/zip.hpp"

namespace dqa {

LoadError::LoadError(Kind kind, SourceSpan span, const std::string& message)
    : std::runtime_error(message), kind_(kind), span_(std::move(span)) {}

std::string_view to_string(LoadError::Kind kind) {
  switch (kind) {
    case LoadError::Kind::NotAnArchive: return "NotAnArchive";
    case LoadError::Kind::MissingEntryBlueprint: return "MissingEntryBlueprint";
    case LoadError::Kind::MetadataMalformed: return "MetadataMalformed";
    case LoadError::Kind::YamlSyntax: return "YamlSyntax";
    case LoadError::Kind::SchemaShape: return "SchemaShape";
    case LoadError::Kind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

using yaml::Node;

std::string_view kind_name(const Node& n) {
  switch (n.kind) {
    case yaml::NodeKind::Null: return "null";
    case yaml::NodeKind::Scalar: return "scalar";
    case yaml::NodeKind::Mapping: return "mapping";
    case yaml::NodeKind::Sequence: return "sequence";
  }
  return "?";
}

[[noreturn]] void shape_error(const std::string& file, const Node& at, std::string_view what,
                              std::string_view expected) {
  throw LoadError(LoadError::Kind::SchemaShape, SourceSpan::of(file, at.range),
                  file + ":" + std::to_string(at.range.start.line) + ":" +
                      std::to_string(at.range.start.col) + ": " + std::string(what) +
                      ": expected " + std::string(expected) + ", found " +
                      std::string(kind_name(at)));
}

std::shared_ptr<const yaml::Document> parse_yaml(std::string_view text, const std::string& file) {
  try {
    return std::make_shared<const yaml::Document>(yaml::parse(text, file));
  } catch (const yaml::ParseError& e) {
    SourceSpan span{file, e.at().byte, e.at().byte, e.at().line, e.at().col};
    throw LoadError(LoadError::Kind::YamlSyntax, span, e.what());
  }
}

// Null or mapping; anything else is a shape error.
bool expect_map(const std::string& file, const Node* n, std::string_view what) {
  if (!n || n->is_null()) return false;
  if (!n->is_map()) shape_error(file, *n, what, "mapping");
  return true;
}

bool expect_seq(const std::string& file, const Node* n, std::string_view what) {
  if (!n || n->is_null()) return false;
  if (!n->is_seq()) shape_error(file, *n, what, "sequence");
  return true;
}

std::string scalar_or_empty(const Node* n) {
  return n && n->is_scalar() && !n->is_null() ? n->text : std::string();
}

std::vector<Property> read_properties(const std::string& file, const Node& map,
                                      const std::string& pointer) {
  std::vector<Property> out;
  for (std::size_t i = 0; i < map.size(); ++i) {
    out.push_back(Property{map.key(i).text, map.value(i), SourceSpan::of(file, map.key(i).range),
                           yaml::pointer_append(pointer, map.key(i).text)});
  }
  return out;
}

std::string render_node(const Node& n) {
  if (n.is_scalar()) return n.text;
  std::string out = n.is_map() ? "{" : "[";
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) out += ", ";
    if (n.is_map()) {
      out += render_node(n.key(i)) + ": " + render_node(n.value(i));
    } else {
      out += render_node(n.item(i));
    }
  }
  out += n.is_map() ? "}" : "]";
  return n.is_null() ? "null" : out;
}

std::optional<double> number_of(const Node& n) {
  return n.as_float();
}

Constraint read_constraint(const std::string& file, const Node& c) {
  if (!c.is_map() || c.size() != 1) shape_error(file, c, "constraint", "single-key mapping");
  const std::string op = c.key(0).text;
  const Node& v = c.value(0);
  Constraint out;
  out.text = op + ": " + render_node(v);
  auto num = [&](const Node& n) {
    auto d = number_of(n);
    if (!d) shape_error(file, n, "constraint bound", "number");
    return *d;
  };
  auto count = [&](const Node& n) {
    auto i = n.as_int();
    if (!i || *i < 0) shape_error(file, n, "length bound", "non-negative integer");
    return static_cast<std::size_t>(*i);
  };
  if (op == "greater_or_equal") {
    out.min = num(v);
  } else if (op == "greater_than") {
    out.min = num(v);
    out.min_exclusive = true;
  } else if (op == "less_or_equal") {
    out.max = num(v);
  } else if (op == "less_than") {
    out.max = num(v);
    out.max_exclusive = true;
  } else if (op == "in_range") {
    if (!v.is_seq() || v.size() != 2) shape_error(file, v, "in_range", "two-element sequence");
    out.min = num(v.item(0));
    out.max = num(v.item(1));
  } else if (op == "valid_values") {
    if (!v.is_seq()) shape_error(file, v, "valid_values", "sequence");
    for (std::size_t i = 0; i < v.size(); ++i) out.valid_values.push_back(v.item(i));
  } else if (op == "equal") {
    out.valid_values.push_back(v);
  } else if (op == "pattern") {
    if (!v.is_scalar()) shape_error(file, v, "pattern", "scalar");
    out.pattern = v.text;
  } else if (op == "min_length") {
    out.min_length = count(v);
  } else if (op == "max_length") {
    out.max_length = count(v);
  } else if (op == "length") {
    out.min_length = count(v);
    out.max_length = out.min_length;
  } else {
    shape_error(file, c.key(0), "unknown constraint '" + op + "'", "a TOSCA constraint operator");
  }
  return out;
}

PropertySchema read_property_schema(const std::string& file, const Node& key, const Node& def) {
  PropertySchema s;
  s.name = key.text;
  s.span = SourceSpan::of(file, key.range);
  if (def.is_scalar() && !def.is_null()) {
    // Short form "name: type".
    s.type_name = def.text;
  } else if (expect_map(file, &def, "property definition")) {
    s.type_name = scalar_or_empty(def.find("type"));
    if (const Node* r = def.find("required")) {
      auto b = r->as_bool();
      if (!b) shape_error(file, *r, "required", "boolean");
      s.required = *b;
    }
    if (const Node* d = def.find("default"); d && !d->is_null()) s.has_default = true;
    if (const Node* cs = def.find("constraints"); expect_seq(file, cs, "constraints")) {
      for (std::size_t i = 0; i < cs->size(); ++i) {
        s.constraints.push_back(read_constraint(file, cs->item(i)));
      }
    }
  }
  s.kind = property_kind_from(s.type_name).value_or(PropertyKind::Any);
  return s;
}

TypeDef read_type(const std::string& file, const Node& key, const Node& def,
                  const std::string& pointer) {
  TypeDef t;
  t.name = key.text;
  t.span = SourceSpan::of(file, key.range);
  t.pointer = pointer;
  if (!expect_map(file, &def, "type definition")) return t;
  if (const Node* d = def.find("derived_from"); d && !d->is_null()) {
    if (!d->is_scalar()) shape_error(file, *d, "derived_from", "scalar");
    t.derived_from = d->text;
  }
  if (const Node* props = def.find("properties"); expect_map(file, props, "properties")) {
    for (std::size_t i = 0; i < props->size(); ++i) {
      t.properties.push_back(read_property_schema(file, props->key(i), props->value(i)));
    }
  }
  if (const Node* caps = def.find("capabilities"); expect_map(file, caps, "capabilities")) {
    for (std::size_t i = 0; i < caps->size(); ++i) {
      CapabilityDef c;
      c.name = caps->key(i).text;
      c.span = SourceSpan::of(file, caps->key(i).range);
      const Node& v = caps->value(i);
      c.type = v.is_scalar() ? v.text : scalar_or_empty(v.find("type"));
      t.capability_defs.emplace(c.name, c);
    }
  }
  if (const Node* reqs = def.find("requirements"); expect_seq(file, reqs, "requirements")) {
    for (std::size_t i = 0; i < reqs->size(); ++i) {
      const Node& item = reqs->item(i);
      if (!item.is_map() || item.size() != 1) {
        shape_error(file, item, "requirement definition", "single-key mapping");
      }
      RequirementDef r;
      r.name = item.key(0).text;
      r.span = SourceSpan::of(file, item.range);
      const Node& v = item.value(0);
      if (v.is_scalar()) {
        r.capability = v.text;
      } else if (v.is_map()) {
        r.capability = scalar_or_empty(v.find("capability"));
        r.node = scalar_or_empty(v.find("node"));
      }
      t.requirement_defs.push_back(r);
    }
  }
  return t;
}

void read_types(const std::string& file, const Node* section, const std::string& pointer,
                std::string_view what, std::map<std::string, TypeDef>& out) {
  if (!expect_map(file, section, what)) return;
  for (std::size_t i = 0; i < section->size(); ++i) {
    const auto& name = section->key(i).text;
    if (out.count(name)) continue;  // first definition wins
    out.emplace(name, read_type(file, section->key(i), section->value(i),
                                yaml::pointer_append(pointer, name)));
  }
}

NodeTemplate read_template(const std::string& file, const Node& key, const Node& def,
                           const std::string& pointer) {
  NodeTemplate t;
  t.name = key.text;
  t.name_span = SourceSpan::of(file, key.range);
  t.span = SourceSpan::of(file, def.is_null() ? key.range : def.range);
  t.pointer = pointer;
  if (!expect_map(file, &def, "node template")) return t;
  if (const Node* type = def.find("type")) {
    if (!type->is_scalar()) shape_error(file, *type, "type", "scalar");
    t.type_name = type->text;
    t.type_span = SourceSpan::of(file, type->range);
  }
  std::string props_ptr = yaml::pointer_append(pointer, "properties");
  if (const Node* props = def.find("properties"); expect_map(file, props, "properties")) {
    t.properties = read_properties(file, *props, props_ptr);
  }
  std::string req_ptr = yaml::pointer_append(pointer, "requirements");
  if (const Node* reqs = def.find("requirements"); expect_seq(file, reqs, "requirements")) {
    for (std::size_t i = 0; i < reqs->size(); ++i) {
      const Node& item = reqs->item(i);
      if (!item.is_map() || item.size() != 1) {
        shape_error(file, item, "requirement", "single-key mapping");
      }
      Requirement r;
      r.name = item.key(0).text;
      r.span = SourceSpan::of(file, item.range);
      r.pointer = yaml::pointer_append(req_ptr, i);
      const Node& v = item.value(0);
      if (v.is_scalar()) {
        r.target_node = v.is_null() ? "" : v.text;
      } else if (v.is_map()) {
        r.target_node = scalar_or_empty(v.find("node"));
        r.capability_name = scalar_or_empty(v.find("capability"));
      } else {
        shape_error(file, v, "requirement assignment", "scalar or mapping");
      }
      t.requirements.push_back(std::move(r));
    }
  }
  if (const Node* caps = def.find("capabilities"); expect_map(file, caps, "capabilities")) {
    for (std::size_t i = 0; i < caps->size(); ++i) {
      t.capabilities.emplace(caps->key(i).text, caps->value(i));
    }
  }
  if (const Node* arts = def.find("artifacts")) {
    auto add = [&](const Node& k, const Node& v) {
      ArtifactRef a;
      a.name = k.text;
      a.span = SourceSpan::of(file, v.is_null() ? k.range : v.range);
      if (v.is_scalar()) {
        a.path = v.text;
      } else if (v.is_map()) {
        a.path = scalar_or_empty(v.find("file"));
        a.type = scalar_or_empty(v.find("type"));
      } else {
        shape_error(file, v, "artifact", "scalar or mapping");
      }
      t.artifacts.push_back(std::move(a));
    };
    if (arts->is_map()) {
      for (std::size_t i = 0; i < arts->size(); ++i) add(arts->key(i), arts->value(i));
    } else if (arts->is_seq()) {
      for (std::size_t i = 0; i < arts->size(); ++i) {
        const Node& item = arts->item(i);
        if (!item.is_map() || item.size() != 1) shape_error(file, item, "artifact", "single-key mapping");
        add(item.key(0), item.value(0));
      }
    } else if (!arts->is_null()) {
      shape_error(file, *arts, "artifacts", "mapping");
    }
  }
  return t;
}

}  // namespace

TopologyModel parse_tosca(std::string_view text, const std::string& file) {
  TopologyModel m;
  m.file = file;
  m.document = parse_yaml(text, file);
  const Node& root = m.document->root;
  if (root.is_null()) return m;
  if (!root.is_map()) shape_error(file, root, "TOSCA document", "mapping");

  m.definitions_version = scalar_or_empty(root.find("tosca_definitions_version"));
  if (const Node* imports = root.find("imports"); expect_seq(file, imports, "imports")) {
    for (std::size_t i = 0; i < imports->size(); ++i) {
      const Node& item = imports->item(i);
      Import imp;
      imp.span = SourceSpan::of(file, item.range);
      if (item.is_scalar()) {
        imp.path = item.text;
      } else if (item.is_map()) {
        if (const Node* f = item.find("file")) {
          imp.path = scalar_or_empty(f);
        } else if (item.size() == 1 && item.value(0).is_map()) {
          imp.path = scalar_or_empty(item.value(0).find("file"));
        } else if (item.size() == 1 && item.value(0).is_scalar()) {
          imp.path = item.value(0).text;
        }
      }
      imp.remote = imp.path.rfind("http://", 0) == 0 || imp.path.rfind("https://", 0) == 0;
      m.imports.push_back(std::move(imp));
    }
  }
  read_types(file, root.find("node_types"), "/node_types", "node_types", m.node_types);
  read_types(file, root.find("capability_types"), "/capability_types", "capability_types",
             m.capability_types);

  const Node* tt = root.find("topology_template");
  if (!expect_map(file, tt, "topology_template")) return m;
  if (const Node* inputs = tt->find("inputs"); expect_map(file, inputs, "inputs")) {
    m.inputs = read_properties(file, *inputs, "/topology_template/inputs");
  }
  if (const Node* outputs = tt->find("outputs"); expect_map(file, outputs, "outputs")) {
    m.outputs = read_properties(file, *outputs, "/topology_template/outputs");
  }
  if (const Node* nts = tt->find("node_templates"); expect_map(file, nts, "node_templates")) {
    for (std::size_t i = 0; i < nts->size(); ++i) {
      m.node_templates.push_back(
          read_template(file, nts->key(i), nts->value(i),
                        yaml::pointer_append("/topology_template/node_templates", nts->key(i).text)));
    }
  }
  if (const Node* rts = tt->find("relationship_templates");
      expect_map(file, rts, "relationship_templates")) {
    for (std::size_t i = 0; i < rts->size(); ++i) {
      RelationshipTemplate r;
      r.name = rts->key(i).text;
      r.span = SourceSpan::of(file, rts->key(i).range);
      if (rts->value(i).is_map()) r.type_name = scalar_or_empty(rts->value(i).find("type"));
      m.relationship_templates.push_back(std::move(r));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

bool is_task_keyword(std::string_view key) {
  static const std::set<std::string, std::less<>> kKeywords = {
      // documented core set
      "name", "when", "notify", "ignore_errors", "block", "rescue", "always", "vars",
      "register", "loop", "become", "tags",
      // further play/task keywords that never name a module
      "args", "become_user", "become_method", "become_flags", "changed_when", "failed_when",
      "delegate_to", "delegate_facts", "run_once", "no_log", "environment", "loop_control",
      "until", "retries", "delay", "check_mode", "diff", "any_errors_fatal",
      "ignore_unreachable", "listen", "async", "poll", "connection", "remote_user", "throttle",
      "timeout", "debugger", "collections", "module_defaults", "with_items", "with_dict",
      "with_fileglob", "with_first_found", "with_together", "with_nested", "with_sequence",
      "with_subelements", "with_lines", "with_random_choice", "with_indexed_items"};
  return kKeywords.count(key) > 0;
}

namespace {

bool truthy(const Node& n) {
  if (auto b = n.as_bool()) return *b;
  if (n.is_scalar() && n.is_plain()) {
    return n.text == "yes" || n.text == "Yes" || n.text == "YES" || n.text == "on" ||
           n.text == "On" || n.text == "ON";
  }
  return false;
}

// Splits "echo hi creates=/tmp/x" into key=value arguments and raw text.
void split_free_form(const std::string& file, const Node& scalar, const std::string& pointer,
                     std::vector<Property>& args) {
  static const std::regex kKey("[A-Za-z_][A-Za-z0-9_]*");
  const std::string& s = scalar.text;
  // Byte offsets are exact only when the scalar is a single plain line.
  bool exact = scalar.is_plain() && s.find('\n') == std::string::npos &&
               scalar.range.end.byte - scalar.range.start.byte == s.size();
  std::string raw;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n')) ++i;
    if (i >= s.size()) break;
    std::size_t b = i;
    char quote = 0;
    while (i < s.size()) {
      char c = s[i];
      if (quote) {
        if (c == quote) quote = 0;
      } else if (c == '"' || c == '\'') {
        quote = c;
      } else if (c == ' ' || c == '\t' || c == '\n') {
        break;
      }
      ++i;
    }
    std::string tok = s.substr(b, i - b);
    auto eq = tok.find('=');
    if (eq != std::string::npos && eq > 0 && std::regex_match(tok.substr(0, eq), kKey)) {
      Node v;
      v.kind = yaml::NodeKind::Scalar;
      v.style = yaml::ScalarStyle::Plain;
      v.text = tok.substr(eq + 1);
      if (v.text.size() >= 2 && (v.text.front() == '"' || v.text.front() == '\'') &&
          v.text.back() == v.text.front()) {
        v.text = v.text.substr(1, v.text.size() - 2);
        v.style = yaml::ScalarStyle::DoubleQuoted;
      }
      SourceSpan key_span = SourceSpan::of(file, scalar.range);
      v.range = scalar.range;
      if (exact) {
        auto shift = [&](std::size_t off) {
          yaml::Mark m = scalar.range.start;
          m.byte += off;
          m.col += off;
          return m;
        };
        v.range = {shift(b + eq + 1), shift(i)};
        key_span = SourceSpan::of(file, {shift(b), shift(b + eq)});
      }
      args.push_back(Property{tok.substr(0, eq), v, key_span, pointer});
    } else {
      if (!raw.empty()) raw += ' ';
      raw += tok;
    }
  }
  if (!raw.empty()) {
    Node v = scalar;
    v.text = raw;
    args.insert(args.begin(), Property{"_raw_params", v, SourceSpan::of(file, scalar.range), pointer});
  }
}

TaskNode read_task(const std::string& file, const Node& node, const std::string& pointer);

std::vector<TaskNode> read_task_list(const std::string& file, const Node* list,
                                     const std::string& pointer, std::string_view what) {
  std::vector<TaskNode> out;
  if (!expect_seq(file, list, what)) return out;
  for (std::size_t i = 0; i < list->size(); ++i) {
    out.push_back(read_task(file, list->item(i), yaml::pointer_append(pointer, i)));
  }
  return out;
}

TaskNode read_task(const std::string& file, const Node& node, const std::string& pointer) {
  if (!node.is_map()) shape_error(file, node, "task", "mapping");
  TaskNode t;
  t.span = SourceSpan::of(file, node.range);
  t.pointer = pointer;
  t.syntax = &node;
  bool is_block = node.find("block") != nullptr;
  t.kind = is_block ? TaskNode::Kind::Block : TaskNode::Kind::Task;

  for (std::size_t i = 0; i < node.size(); ++i) {
    const Node& k = node.key(i);
    const Node& v = node.value(i);
    const std::string& key = k.text;
    std::string vptr = yaml::pointer_append(pointer, key);
    if (key == "name") {
      if (!v.is_null()) t.name = v.is_scalar() ? v.text : std::string();
    } else if (key == "when") {
      if (v.is_seq()) {
        std::string expr;
        for (std::size_t j = 0; j < v.size(); ++j) {
          if (j) expr += " and ";
          expr += v.item(j).text;
        }
        t.when_expr = expr;
      } else if (!v.is_null()) {
        t.when_expr = v.text;
      }
      t.when_span = SourceSpan::of(file, v.range);
    } else if (key == "notify") {
      if (v.is_seq()) {
        for (std::size_t j = 0; j < v.size(); ++j) t.notify.push_back(v.item(j).text);
      } else if (v.is_scalar() && !v.is_null()) {
        t.notify.push_back(v.text);
      }
    } else if (key == "ignore_errors") {
      t.ignore_errors = truthy(v);
      t.ignore_errors_span = SourceSpan::of(file, v.range);
    } else if (key == "vars") {
      if (expect_map(file, &v, "vars")) t.vars = read_properties(file, v, vptr);
    } else if (key == "listen") {
      t.listen = v.text;
    } else if (key == "args") {
      if (expect_map(file, &v, "args")) {
        auto extra = read_properties(file, v, vptr);
        t.args.insert(t.args.end(), extra.begin(), extra.end());
      }
    } else if (key == "block") {
      t.children = read_task_list(file, &v, vptr, "block");
    } else if (key == "rescue") {
      t.rescue = read_task_list(file, &v, vptr, "rescue");
    } else if (key == "always") {
      t.always = read_task_list(file, &v, vptr, "always");
    } else if (is_task_keyword(key)) {
      // recognised keyword without IR representation
    } else if (!t.module) {
      if (is_block) shape_error(file, k, "block '" + key + "'", "no module key in a block");
      t.module = key;
      t.module_span = SourceSpan::of(file, k.range);
      t.module_pointer = vptr;
      if (v.is_map()) {
        auto args = read_properties(file, v, vptr);
        t.args.insert(t.args.begin(), args.begin(), args.end());
      } else if (v.is_scalar() && !v.is_null()) {
        t.free_form = true;
        std::vector<Property> args;
        split_free_form(file, v, vptr, args);
        t.args.insert(t.args.begin(), args.begin(), args.end());
      } else if (!v.is_null()) {
        shape_error(file, v, "module arguments", "mapping or string");
      }
    }
  }
  if (!is_block && !t.module) shape_error(file, node, "task", "a module or a block");
  if (!is_block && (node.find("rescue") || node.find("always"))) {
    shape_error(file, node, "rescue/always without block", "a block");
  }
  return t;
}

}  // namespace

PlaybookModel parse_playbook(std::string_view text, const std::string& file) {
  PlaybookModel m;
  m.file = file;
  m.line_count = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  if (!text.empty() && text.back() != '\n') ++m.line_count;
  m.document = parse_yaml(text, file);
  const Node& root = m.document->root;
  if (root.is_null()) return m;
  if (!root.is_seq()) shape_error(file, root, "playbook", "sequence of plays");
  for (std::size_t i = 0; i < root.size(); ++i) {
    const Node& pn = root.item(i);
    std::string pptr = yaml::pointer_append("", i);
    if (!pn.is_map()) shape_error(file, pn, "play", "mapping");
    Play play;
    play.span = SourceSpan::of(file, pn.range);
    play.pointer = pptr;
    if (const Node* n = pn.find("name"); n && n->is_scalar() && !n->is_null()) play.name = n->text;
    if (const Node* h = pn.find("hosts")) {
      if (h->is_seq()) {
        for (std::size_t j = 0; j < h->size(); ++j) {
          if (j) play.hosts += ',';
          play.hosts += h->item(j).text;
        }
      } else {
        play.hosts = scalar_or_empty(h);
      }
    }
    if (const Node* v = pn.find("vars"); expect_map(file, v, "vars")) {
      play.vars = read_properties(file, *v, yaml::pointer_append(pptr, "vars"));
    }
    for (const char* section : {"pre_tasks", "tasks", "post_tasks"}) {
      auto tasks = read_task_list(file, pn.find(section), yaml::pointer_append(pptr, section), section);
      play.tasks.insert(play.tasks.end(), std::make_move_iterator(tasks.begin()),
                        std::make_move_iterator(tasks.end()));
    }
    play.handlers = read_task_list(file, pn.find("handlers"),
                                   yaml::pointer_append(pptr, "handlers"), "handlers");
    m.plays.push_back(std::move(play));
  }
  return m;
}

// ---------------------------------------------------------------------------

std::map<std::string, std::string> parse_tosca_meta(std::string_view text, const std::string& file) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view l = text.substr(pos, end - pos);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.find_first_not_of(" \t") != std::string_view::npos) {
      auto colon = l.find(':');
      bool ok = colon != std::string_view::npos && colon > 0 && l[0] != ' ' &&
                (colon + 1 == l.size() || l[colon + 1] == ' ');
      if (!ok) {
        throw LoadError(LoadError::Kind::MetadataMalformed,
                        SourceSpan{file, pos, pos + l.size(), line, 1},
                        file + ":" + std::to_string(line) + ": expected 'key: value'");
      }
      std::string key(l.substr(0, colon));
      std::string value(l.substr(std::min(l.size(), colon + 1)));
      value.erase(0, value.find_first_not_of(' '));
      while (!value.empty() && value.back() == ' ') value.pop_back();
      out[key] = value;
    }
    pos = end + 1;
    ++line;
  }
  return out;
}

namespace {

bool has_yaml_ext(std::string_view p) {
  auto ends = [&](std::string_view s) {
    return p.size() >= s.size() && p.substr(p.size() - s.size()) == s;
  };
  return ends(".yml") || ends(".yaml");
}

std::string normalize_rel(const std::string& base_dir, const std::string& rel) {
  std::filesystem::path p = base_dir.empty() ? std::filesystem::path(rel)
                                             : std::filesystem::path(base_dir) / rel;
  std::string s = p.lexically_normal().generic_string();
  if (s.rfind("./", 0) == 0) s = s.substr(2);
  return s;
}

std::string dir_of(const std::string& rel) {
  auto slash = rel.rfind('/');
  return slash == std::string::npos ? std::string() : rel.substr(0, slash);
}

bool defines_topology(std::string_view text) {
  static const std::regex kTopology(R"((^|\n)topology_template[ \t]*:)");
  return std::regex_search(text.begin(), text.end(), kTopology);
}

bool root_is_sequence(std::string_view text) {
  try {
    return yaml::parse(text).root.is_seq();
  } catch (const yaml::ParseError&) {
    return false;
  }
}

void merge_imports(const std::map<std::string, std::string>& files, const std::string& file,
                   TopologyModel& into, std::set<std::string>& seen) {
  auto it = files.find(file);
  if (it == files.end() || !seen.insert(file).second) return;
  TopologyModel imported = parse_tosca(it->second, file);
  for (auto& [name, def] : imported.node_types) into.node_types.emplace(name, def);
  for (auto& [name, def] : imported.capability_types) into.capability_types.emplace(name, def);
  for (const auto& imp : imported.imports) {
    if (!imp.remote) merge_imports(files, normalize_rel(dir_of(file), imp.path), into, seen);
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) {
    throw LoadError(LoadError::Kind::Io, SourceSpan::at_start(p.generic_string()),
                    "cannot read " + p.generic_string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CsarArchive load_csar_files(std::map<std::string, std::string> files, std::string root) {
  CsarArchive a;
  a.root = std::move(root);
  a.files = std::move(files);

  const std::string meta_path = "TOSCA-Metadata/TOSCA.meta";
  if (auto it = a.files.find(meta_path); it != a.files.end()) {
    a.metadata = parse_tosca_meta(it->second, meta_path);
  }
  if (auto e = a.metadata.find("Entry-Definitions"); e != a.metadata.end()) {
    a.entry_blueprint = normalize_rel("", e->second);
    if (!a.files.count(a.entry_blueprint)) {
      throw LoadError(LoadError::Kind::MissingEntryBlueprint, SourceSpan::at_start(meta_path),
                      "Entry-Definitions names a missing file: " + e->second);
    }
  } else {
    std::vector<std::string> candidates;
    for (const auto& [path, text] : a.files) {
      if (path.find('/') != std::string::npos || !has_yaml_ext(path)) continue;
      if (path == "goals.yaml" || path == "qa.yaml") continue;
      if (defines_topology(text)) candidates.push_back(path);
    }
    if (candidates.empty()) {
      throw LoadError(LoadError::Kind::MissingEntryBlueprint, SourceSpan::at_start(a.root),
                      "no top-level TOSCA document defining a topology_template");
    }
    if (candidates.size() > 1) {
      std::string names;
      for (const auto& c : candidates) names += (names.empty() ? "" : ", ") + c;
      throw LoadError(LoadError::Kind::MissingEntryBlueprint, SourceSpan::at_start(a.root),
                      "ambiguous entry blueprint: " + names);
    }
    a.entry_blueprint = candidates.front();
  }

  a.topology = parse_tosca(a.files.at(a.entry_blueprint), a.entry_blueprint);
  std::set<std::string> seen{a.entry_blueprint};
  for (const auto& imp : a.topology.imports) {
    if (!imp.remote) {
      merge_imports(a.files, normalize_rel(dir_of(a.entry_blueprint), imp.path), a.topology, seen);
    }
  }

  std::map<std::string, ArtifactRef> artifacts;
  std::set<std::string> bound_nodes;
  for (const auto& node : a.topology.node_templates) {
    bool first = bound_nodes.insert(node.name).second;
    for (const auto& art : node.artifacts) {
      if (art.path.empty()) continue;
      std::string path = normalize_rel(dir_of(a.entry_blueprint), art.path);
      auto f = a.files.find(path);
      if (f == a.files.end()) continue;
      ArtifactRef ref = art;
      ref.path = path;
      bool ansible_type = art.type.find("Ansible") != std::string::npos ||
                          art.type.find("ansible") != std::string::npos;
      ref.kind = has_yaml_ext(path) && (ansible_type || root_is_sequence(f->second))
                     ? ArtifactRef::Kind::AnsiblePlaybook
                     : ArtifactRef::Kind::Other;
      if (first && ref.kind == ArtifactRef::Kind::AnsiblePlaybook) {
        auto& bound = a.node_playbooks[node.name];
        if (std::find(bound.begin(), bound.end(), path) == bound.end()) bound.push_back(path);
      }
      artifacts.emplace(path, ref);
    }
  }
  for (const auto& [path, text] : a.files) {
    if (path.rfind("playbooks/", 0) == 0 && has_yaml_ext(path) && !artifacts.count(path)) {
      ArtifactRef ref;
      ref.name = path;
      ref.path = path;
      ref.kind = ArtifactRef::Kind::AnsiblePlaybook;
      ref.span = SourceSpan::at_start(path);
      artifacts.emplace(path, ref);
    }
  }
  for (auto& [path, ref] : artifacts) {
    a.iac_artifacts.push_back(ref);
    if (ref.kind == ArtifactRef::Kind::AnsiblePlaybook) {
      a.playbooks.emplace(path, parse_playbook(a.files.at(path), path));
    }
  }
  if (a.files.count("goals.yaml")) a.perf_goals = "goals.yaml";
  return a;
}

CsarArchive load_csar(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    std::map<std::string, std::string> files;
    for (auto it = fs::recursive_directory_iterator(path, ec); it != fs::recursive_directory_iterator();
         it.increment(ec)) {
      if (ec) break;
      if (!it->is_regular_file()) continue;
      auto rel = fs::relative(it->path(), path).generic_string();
      if (rel.rfind(".git/", 0) == 0) continue;
      files[rel] = read_file(it->path());
    }
    return load_csar_files(std::move(files), path.generic_string());
  }
  if (!fs::is_regular_file(path, ec)) {
    throw LoadError(LoadError::Kind::Io, SourceSpan::at_start(path.generic_string()),
                    "no such file or directory: " + path.generic_string());
  }
  std::string bytes = read_file(path);
  if (!zip::looks_like_zip(bytes)) {
    throw LoadError(LoadError::Kind::NotAnArchive, SourceSpan::at_start(path.generic_string()),
                    path.generic_string() + " is neither a zip archive nor a directory");
  }
  std::map<std::string, std::string> files;
  try {
    files = zip::read_archive(bytes);
  } catch (const zip::ZipError& e) {
    throw LoadError(LoadError::Kind::NotAnArchive, SourceSpan::at_start(path.generic_string()),
                    path.generic_string() + ": " + e.what());
  }
  auto a = load_csar_files(std::move(files), path.generic_string());
  a.zipped = true;
  return a;
}

CsarArchive load_input(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_directory(path, ec)) return load_csar(path);
  if (!fs::is_regular_file(path, ec)) return load_csar(path);
  std::string bytes = read_file(path);
  if (zip::looks_like_zip(bytes)) return load_csar(path);

  std::string name = path.filename().generic_string();
  if (!defines_topology(bytes)) {
    CsarArchive a;
    a.root = path.parent_path().generic_string();
    a.files[name] = bytes;
    a.playbooks.emplace(name, parse_playbook(bytes, name));
    ArtifactRef ref;
    ref.name = name;
    ref.path = name;
    ref.kind = ArtifactRef::Kind::AnsiblePlaybook;
    ref.span = SourceSpan::at_start(name);
    a.iac_artifacts.push_back(ref);
    return a;
  }
  std::map<std::string, std::string> files{{name, bytes}};
  return load_csar_files(std::move(files), path.parent_path().generic_string());
}

}  // namespace dqa
