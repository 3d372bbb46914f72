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

#include "deployqa/fix.hpp"

#include <algorithm>
#include <regex>

#include "deployqa/source.hpp"
#include "deployqa/yaml.hpp"

namespace dqa {

using nlohmann::json;
using yaml::Node;

std::string_view to_string(FixError::Kind kind) {
  switch (kind) {
    case FixError::Kind::NotAutoFixable: return "not_auto_fixable";
    case FixError::Kind::StaleSource: return "stale_source";
    case FixError::Kind::TemplateError: return "template_error";
    case FixError::Kind::OverlappingEdits: return "overlapping_edits";
  }
  return "unknown";
}

std::string simplify_condition(std::string_view condition) {
  static const std::regex kTrue(R"((\S+)\s*==\s*(?:true|True)\b)");
  static const std::regex kFalse(R"((\S+)\s*==\s*(?:false|False)\b)");
  std::string s(condition);
  s = std::regex_replace(s, kTrue, "$1");
  s = std::regex_replace(s, kFalse, "not $1");
  return s;
}

namespace {

std::string identifier(std::string_view key) {
  std::string out;
  for (char c : key) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

bool is_topology_subject(const std::string& subject) {
  return subject.rfind("/topology_template", 0) == 0;
}

std::string https_url(const std::string& value, const json& params) {
  static const std::regex kUrl(R"(http://(\[[^\]]*\]|[^/:\s?#"'\]]+))", std::regex::icase);
  std::vector<std::string> loopback;
  if (auto it = params.find("loopback_hosts"); it != params.end() && it->is_array()) {
    for (const auto& h : *it) loopback.push_back(h.get<std::string>());
  }
  std::string out;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(value.begin(), value.end(), kUrl); it != std::sregex_iterator(); ++it) {
    std::string host = (*it)[1];
    std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) { return std::tolower(c); });
    auto pos = static_cast<std::size_t>(it->position(0));
    out += value.substr(last, pos - last);
    out += std::find(loopback.begin(), loopback.end(), host) == loopback.end() ? "https://" : "http://";
    out += (*it)[1];
    last = pos + static_cast<std::size_t>(it->length(0));
  }
  return out + value.substr(last);
}

std::optional<std::string> auto_binding(const std::string& param, const Finding& f, const DefectEntry& entry) {
  auto str = [&](const char* key) -> std::optional<std::string> {
    auto it = f.data.find(key);
    if (it == f.data.end() || !it->is_string() || it->get<std::string>().empty()) return std::nullopt;
    return it->get<std::string>();
  };
  if (param == "task_name") {
    if (auto m = str("module")) return *m + " task";
  } else if (param == "replacement") {
    return str("replacement");
  } else if (param == "condition") {
    if (auto c = str("condition")) return simplify_condition(*c);
  } else if (param == "https_url") {
    if (auto v = str("value")) return https_url(*v, entry.detection.parameters);
  } else if (param == "var_name") {
    if (auto k = str("key")) return "vault_" + identifier(*k);
  } else if (param == "input_name") {
    // An input default cannot read itself; leave the choice to the caller.
    if (f.subject.rfind("/topology_template/inputs/", 0) == 0) return std::nullopt;
    if (auto k = str("key")) return identifier(*k);
  }
  return std::nullopt;
}

void refresh_unbound(FixPlan& plan) {
  plan.unbound.clear();
  for (const auto& p : plan.resolution.parameters) {
    if (!plan.bindings.count(p.name)) plan.unbound.push_back(p.name);
  }
}

// ---------------------------------------------------------------------------
// Source navigation

struct Located {
  const Node* parent = nullptr;
  std::size_t index = 0;
  const Node* key = nullptr;  // set when the parent is a mapping
  const Node* value = nullptr;
};

std::optional<Located> locate(const Node& root, std::string_view pointer) {
  Located at;
  at.value = &root;
  for (const auto& seg : yaml::pointer_segments(pointer)) {
    const Node& cur = *at.value;
    if (cur.is_map()) {
      auto i = cur.find_index(seg);
      if (!i) return std::nullopt;
      at = {&cur, *i, &cur.key(*i), &cur.value(*i)};
    } else if (cur.is_seq()) {
      if (seg.empty() || !std::all_of(seg.begin(), seg.end(), ::isdigit)) return std::nullopt;
      std::size_t i = std::stoul(seg);
      if (i >= cur.size()) return std::nullopt;
      at = {&cur, i, nullptr, &cur.item(i)};
    } else {
      return std::nullopt;
    }
  }
  return at;
}

std::string parent_pointer(std::string_view pointer, std::string& last) {
  auto segs = yaml::pointer_segments(pointer);
  last = segs.empty() ? "" : segs.back();
  std::string out;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) out = yaml::pointer_append(out, segs[i]);
  return out;
}

std::size_t line_start(std::string_view text, std::size_t pos) {
  auto nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
  return pos == 0 || nl == std::string_view::npos ? 0 : nl + 1;
}

// End of a node's content, ignoring a trailing newline that block scalars include.
std::size_t content_end(std::string_view text, const Node& n) {
  std::size_t e = n.range.end.byte;
  while (e > n.range.start.byte && text[e - 1] == '\n') --e;
  return e;
}

// Start of the line after the one holding `pos`, or npos at end of input.
std::size_t next_line(std::string_view text, std::size_t pos) {
  auto nl = text.find('\n', pos);
  return nl == std::string_view::npos ? std::string_view::npos : nl + 1;
}

std::string indent_of(const Node& n) { return std::string(n.range.start.col - 1, ' '); }

std::string double_quoted(std::string_view v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string scalar_text(std::string_view v, bool in_flow) {
  std::string q = yaml::quote_scalar(v);
  if (in_flow && q.front() != '"' && q.find_first_of(",[]{}") != std::string::npos) return double_quoted(v);
  return q;
}

std::string reindent(const std::string& text, const std::string& first, const std::string& rest) {
  std::string out = first;
  for (char c : text) {
    out += c;
    if (c == '\n') out += rest;
  }
  return out;
}

std::string substitute(const std::string& tmpl, const std::map<std::string, std::string>& bindings) {
  static const std::regex kPlaceholder(R"(\$\{([A-Za-z_][A-Za-z0-9_]*)\})");
  std::string out;
  std::size_t last = 0;
  for (auto it = std::sregex_iterator(tmpl.begin(), tmpl.end(), kPlaceholder); it != std::sregex_iterator(); ++it) {
    auto b = bindings.find((*it)[1]);
    if (b == bindings.end()) {
      throw FixError(FixError::Kind::TemplateError, "parameter '" + (*it)[1].str() + "' is not bound");
    }
    auto pos = static_cast<std::size_t>(it->position(0));
    out += tmpl.substr(last, pos - last) + b->second;
    last = pos + static_cast<std::size_t>(it->length(0));
  }
  return out + tmpl.substr(last);
}

class Lowering {
 public:
  Lowering(std::string_view text, const Node& root) : text_(text), root_(root) {}

  void set_key(const std::string& pointer, const std::string& value, bool raw) {
    if (auto at = locate(root_, pointer)) {
      bool flow = at->parent && at->parent->flow;
      std::string rendered = raw ? value : scalar_text(value, flow);
      const Node& v = *at->value;
      if (v.is_null() && v.range.start.byte == v.range.end.byte) {
        std::size_t pos = v.range.start.byte;
        bool after_colon = pos > 0 && text_[pos - 1] == ':';
        add(pos, pos, (after_colon ? " " : "") + rendered);
      } else {
        add(v.range.start.byte, content_end(text_, v), rendered);
      }
      return;
    }
    std::string key;
    auto parent = locate(root_, parent_pointer(pointer, key));
    if (!parent || !parent->value->is_map()) {
      throw FixError(FixError::Kind::TemplateError, "no mapping to hold '" + key + "' at " + pointer);
    }
    const Node& map = *parent->value;
    std::string entry = scalar_text(key, map.flow) + ": " + (raw ? value : scalar_text(value, map.flow));
    if (map.flow) {
      std::size_t close = map.range.end.byte - 1;
      add(close, close, (map.size() ? ", " : "") + entry);
      return;
    }
    if (map.size() == 0) throw FixError(FixError::Kind::TemplateError, "empty block mapping at " + pointer);
    insert_after(content_end(text_, map.value(map.size() - 1)), indent_of(map.key(0)) + entry);
  }

  void remove_key(const std::string& pointer) {
    auto at = locate(root_, pointer);
    if (!at || !at->key) throw FixError(FixError::Kind::TemplateError, "no mapping entry at " + pointer);
    const Node& map = *at->parent;
    std::size_t i = at->index;
    bool has_next = i + 1 < map.size();
    std::size_t ks = at->key->range.start.byte;
    std::size_t ve = content_end(text_, *at->value);
    if (map.flow) {
      if (has_next) {
        add(ks, map.key(i + 1).range.start.byte, "");
      } else if (i > 0) {
        add(content_end(text_, map.value(i - 1)), ve, "");
      } else {
        add(ks, ve, "");
      }
      return;
    }
    std::size_t ls = line_start(text_, ks);
    bool own_line = text_.substr(ls, ks - ls).find_first_not_of(' ') == std::string_view::npos;
    if (own_line) {
      std::size_t le = next_line(text_, ve);
      add(ls, le == std::string_view::npos ? text_.size() : le, "");
    } else if (has_next) {
      add(ks, map.key(i + 1).range.start.byte, "");
    } else {
      add(ks, ve, "{}");
    }
  }

  void rename_key(const std::string& pointer, const std::string& name) {
    auto at = locate(root_, pointer);
    if (!at || !at->key) throw FixError(FixError::Kind::TemplateError, "no mapping entry at " + pointer);
    add(at->key->range.start.byte, at->key->range.end.byte, scalar_text(name, at->parent->flow));
  }

  void insert_sibling(const std::string& pointer, const std::string& node_text) {
    auto at = locate(root_, pointer);
    if (!at || !at->parent) throw FixError(FixError::Kind::TemplateError, "no element at " + pointer);
    const Node& parent = *at->parent;
    std::size_t end = content_end(text_, *at->value);
    if (parent.flow) {
      add(end, end, ", " + node_text);
      return;
    }
    if (parent.is_seq()) {
      std::size_t dash = text_.rfind('-', at->value->range.start.byte);
      std::string indent(dash - line_start(text_, dash), ' ');
      insert_after(end, reindent(node_text, indent + "- ", indent + "  "));
    } else {
      std::string indent = indent_of(*at->key);
      insert_after(end, reindent(node_text, indent, indent));
    }
  }

  std::vector<Edit> edits() {
    std::stable_sort(edits_.begin(), edits_.end(), [](const Edit& a, const Edit& b) {
      return std::tie(a.start_byte, a.end_byte) < std::tie(b.start_byte, b.end_byte);
    });
    return edits_;
  }

 private:
  void add(std::size_t start, std::size_t end, std::string replacement) {
    edits_.push_back({start, end, std::move(replacement)});
  }

  // Inserts full lines after the line holding `pos`.
  void insert_after(std::size_t pos, const std::string& lines) {
    std::size_t at = next_line(text_, pos);
    if (at == std::string_view::npos) {
      add(text_.size(), text_.size(), "\n" + lines);
    } else {
      add(at, at, lines + "\n");
    }
  }

  std::string_view text_;
  const Node& root_;
  std::vector<Edit> edits_;
};

void check_edits(const std::vector<Edit>& edits, std::size_t size) {
  for (std::size_t i = 0; i < edits.size(); ++i) {
    if (edits[i].start_byte > edits[i].end_byte || edits[i].end_byte > size) {
      throw FixError(FixError::Kind::StaleSource, "edit outside the source text");
    }
    if (i > 0) {
      const Edit& a = edits[i - 1];
      const Edit& b = edits[i];
      if (b.start_byte < a.start_byte || b.start_byte < a.end_byte) {
        throw FixError(FixError::Kind::OverlappingEdits,
                       "edits at bytes " + std::to_string(a.start_byte) + " and " +
                           std::to_string(b.start_byte) + " overlap");
      }
    }
  }
}

}  // namespace

std::vector<FixPlan> recommend(const Finding& finding, const Catalog& catalog) {
  const DefectEntry* entry = catalog.find(finding.rule_id);
  if (!entry) throw UnknownRule(finding.rule_id);
  Target kind = is_topology_subject(finding.subject) ? Target::Tosca
                : entry->has_target(Target::Ansible)  ? Target::Ansible
                : entry->targets.empty()              ? Target::Tosca
                                                      : entry->targets.front();
  std::vector<FixPlan> plans;
  for (const auto& r : entry->resolutions) {
    if (!r.applies_to.empty() && std::find(r.applies_to.begin(), r.applies_to.end(), kind) == r.applies_to.end()) {
      continue;
    }
    FixPlan plan{finding, r, {}, finding.span.file, {}};
    for (const auto& p : r.parameters) {
      if (auto v = auto_binding(p.name, finding, *entry)) {
        plan.bindings[p.name] = *v;
      } else if (p.default_value) {
        plan.bindings[p.name] = *p.default_value;
      }
    }
    refresh_unbound(plan);
    plans.push_back(std::move(plan));
  }
  return plans;
}

void bind(FixPlan& plan, const std::string& name, std::string value) {
  plan.bindings[name] = std::move(value);
  refresh_unbound(plan);
}

Patch render_patch(const FixPlan& plan, std::string_view source,
                   const std::optional<std::string>& expected_digest) {
  if (!plan.resolution.auto_fixable || !plan.resolution.fix_template) {
    throw FixError(FixError::Kind::NotAutoFixable, plan.resolution.id + " is advice only");
  }
  if (!plan.unbound.empty()) {
    throw FixError(FixError::Kind::TemplateError, "parameter '" + plan.unbound.front() + "' is not bound");
  }
  const Finding& f = plan.finding;
  if (f.subject.find('#') != std::string::npos) {
    throw FixError(FixError::Kind::NotAutoFixable, "finding at " + f.subject + " has no patchable node");
  }
  std::string digest = sha256_hex(source);
  if (expected_digest && *expected_digest != digest) {
    throw FixError(FixError::Kind::StaleSource, plan.target_file + " changed since it was analyzed");
  }
  yaml::Document doc;
  try {
    doc = yaml::parse(source, plan.target_file);
  } catch (const yaml::ParseError& e) {
    throw FixError(FixError::Kind::StaleSource, plan.target_file + " no longer parses: " + e.what());
  }
  auto at = locate(doc.root, f.subject);
  auto matches = [&](const Node* n) {
    return n && n->range.start.byte == f.span.start_byte && n->range.end.byte == f.span.end_byte;
  };
  if (!at || !(matches(at->value) || matches(at->key))) {
    throw FixError(FixError::Kind::StaleSource, plan.target_file + " no longer matches finding " + f.rule_id +
                                                    " at " + f.subject);
  }

  Lowering low(source, doc.root);
  for (const auto& d : *plan.resolution.fix_template) {
    std::string target = f.subject;
    for (const auto& seg : yaml::pointer_segments(d.path.empty() ? "" : "/" + d.path)) {
      target = yaml::pointer_append(target, seg);
    }
    std::string value = substitute(d.value, plan.bindings);
    switch (d.op) {
      case Directive::Op::SetKey: low.set_key(target, value, d.raw); break;
      case Directive::Op::RemoveKey: low.remove_key(target); break;
      case Directive::Op::RenameKey: low.rename_key(target, value); break;
      case Directive::Op::InsertSibling: low.insert_sibling(target, value); break;
    }
  }
  Patch patch{plan.target_file, low.edits(), digest};
  check_edits(patch.edits, source.size());
  return patch;
}

Patch merge_patches(const std::vector<Patch>& patches) {
  Patch out;
  for (const auto& p : patches) {
    if (out.file.empty() && out.base_digest.empty()) {
      out.file = p.file;
      out.base_digest = p.base_digest;
    } else if (p.file != out.file || p.base_digest != out.base_digest) {
      throw FixError(FixError::Kind::StaleSource, "patches for " + p.file + " refer to different texts");
    }
    out.edits.insert(out.edits.end(), p.edits.begin(), p.edits.end());
  }
  std::stable_sort(out.edits.begin(), out.edits.end(), [](const Edit& a, const Edit& b) {
    return std::tie(a.start_byte, a.end_byte) < std::tie(b.start_byte, b.end_byte);
  });
  out.edits.erase(std::unique(out.edits.begin(), out.edits.end()), out.edits.end());
  for (std::size_t i = 1; i < out.edits.size(); ++i) {
    if (out.edits[i].start_byte < out.edits[i - 1].end_byte) {
      throw FixError(FixError::Kind::OverlappingEdits,
                     "fixes in " + out.file + " touch overlapping text at byte " +
                         std::to_string(out.edits[i].start_byte));
    }
  }
  return out;
}

FileFixes fix_file(const std::string& file, const std::vector<Finding>& findings, std::string_view source,
                   const Catalog& catalog, const std::optional<std::string>& expected_digest) {
  FileFixes out;
  std::vector<Patch> patches;
  for (const auto& f : findings) {
    if (f.span.file != file) throw std::invalid_argument("finding for " + f.span.file + " passed with " + file);
    auto plans = recommend(f, catalog);
    auto it = std::find_if(plans.begin(), plans.end(), [](const FixPlan& p) { return p.applicable(); });
    if (it == plans.end()) {
      out.advice.push_back({f, std::move(plans)});
      continue;
    }
    patches.push_back(render_patch(*it, source, expected_digest));
    out.applied.push_back(*it);
  }
  out.patch = patches.empty() ? Patch{file, {}, sha256_hex(source)} : merge_patches(patches);
  return out;
}

std::string apply_patch(std::string_view source, const Patch& patch) {
  if (!patch.base_digest.empty() && sha256_hex(source) != patch.base_digest) {
    throw FixError(FixError::Kind::StaleSource, patch.file + " changed since the patch was made");
  }
  check_edits(patch.edits, source.size());
  std::string out(source);
  for (auto it = patch.edits.rbegin(); it != patch.edits.rend(); ++it) {
    out.replace(it->start_byte, it->end_byte - it->start_byte, it->replacement);
  }
  return out;
}

json to_json(const Patch& patch) {
  json edits = json::array();
  for (const auto& e : patch.edits) {
    edits.push_back({{"start_byte", e.start_byte}, {"end_byte", e.end_byte}, {"replacement", e.replacement}});
  }
  return {{"file", patch.file}, {"base_digest", patch.base_digest}, {"edits", edits}};
}

Patch patch_from_json(const json& j) {
  Patch p;
  p.file = j.at("file").get<std::string>();
  p.base_digest = j.at("base_digest").get<std::string>();
  for (const auto& e : j.at("edits")) {
    p.edits.push_back({e.at("start_byte").get<std::size_t>(), e.at("end_byte").get<std::size_t>(),
                       e.at("replacement").get<std::string>()});
  }
  return p;
}

}  // namespace dqa
