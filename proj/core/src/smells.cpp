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

#include "deployqa/smells.hpp"

#include <algorithm>
#include <functional>
#include <regex>

#include "deployqa/yaml_json.hpp"

namespace dqa {

using nlohmann::json;
using yaml::Node;

RuleContext::RuleContext(const Catalog& catalog) : catalog_(&catalog) {}

void RuleContext::set_parameter(const std::string& rule_id, const std::string& name, json value) {
  const DefectEntry* e = catalog_->find(rule_id);
  if (!e) throw InvalidOverride("cannot configure unknown rule " + rule_id);
  const json& declared = e->detection.parameters;
  if (!declared.contains(name)) {
    throw InvalidOverride("rule " + rule_id + " has no parameter '" + name + "'");
  }
  const json& current = declared.at(name);
  bool compatible = current.type() == value.type() || (current.is_number() && value.is_number());
  if (!compatible) {
    throw InvalidOverride("parameter " + rule_id + "." + name + " expects a value of type " +
                          std::string(current.type_name()));
  }
  overrides_[rule_id][name] = std::move(value);
}

void RuleContext::disable(const std::string& rule_id) {
  if (!catalog_->find(rule_id)) throw InvalidOverride("cannot disable unknown rule " + rule_id);
  disabled_.insert(rule_id);
}

json RuleContext::parameters(const DefectEntry& entry) const {
  json p = entry.detection.parameters.is_object() ? entry.detection.parameters : json::object();
  if (auto it = overrides_.find(entry.rule_id); it != overrides_.end()) {
    for (const auto& [k, v] : it->second.items()) p[k] = v;
  }
  return p;
}

Category category_of(const Finding& finding, const Catalog& catalog) {
  const DefectEntry* e = catalog.find(finding.rule_id);
  if (!e) throw UnknownRule(finding.rule_id);
  return e->category;
}

std::string short_module_name(std::string_view module) {
  for (std::string_view prefix : {"ansible.builtin.", "ansible.legacy."}) {
    if (module.substr(0, prefix.size()) == prefix) return std::string(module.substr(prefix.size()));
  }
  return std::string(module);
}

namespace {

std::vector<std::string> string_list(const json& params, const char* name) {
  std::vector<std::string> out;
  if (auto it = params.find(name); it != params.end() && it->is_array()) {
    for (const auto& v : *it) {
      if (v.is_string()) out.push_back(v.get<std::string>());
    }
  }
  return out;
}

std::string string_param(const json& params, const char* name, std::string fallback) {
  auto it = params.find(name);
  return it != params.end() && it->is_string() ? it->get<std::string>() : fallback;
}

long long int_param(const json& params, const char* name, long long fallback) {
  auto it = params.find(name);
  return it != params.end() && it->is_number() ? it->get<long long>() : fallback;
}

bool contains(const std::vector<std::string>& xs, std::string_view x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::string regex_alternation(const std::vector<std::string>& words) {
  static const std::regex kSpecial(R"([.^$|()\[\]{}*+?\\])");
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += '|';
    out += std::regex_replace(w, kSpecial, R"(\$&)");
  }
  return out;
}

/// A key/value occurrence seen by the value detectors.
struct ValueSite {
  const std::string& key;  // nearest mapping key above the scalar
  const Node& value;
  const std::string& pointer;
};

using SiteVisitor = std::function<void(const ValueSite&)>;

// Visits every scalar below `node`, tracking the nearest enclosing key.
void walk_values(const Node& node, const std::string& pointer, const std::string& key,
                 bool skip_functions, const SiteVisitor& visit) {
  if (node.is_scalar()) {
    visit({key, node, pointer});
  } else if (node.is_map()) {
    if (skip_functions && is_function_ref(node)) return;
    for (std::size_t i = 0; i < node.size(); ++i) {
      const std::string& k = node.key(i).text;
      walk_values(node.value(i), yaml::pointer_append(pointer, k), k, skip_functions, visit);
    }
  } else if (node.is_seq()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      walk_values(node.item(i), yaml::pointer_append(pointer, i), key, skip_functions, visit);
    }
  }
}

class Emitter {
 public:
  Emitter(const Catalog& catalog, const std::string& file, std::vector<Finding>& out)
      : catalog_(catalog), file_(file), out_(out) {}

  void emit(const DefectEntry& entry, std::string message, SourceSpan span, std::string subject,
            json data = json::object()) {
    out_.push_back(make_finding(catalog_, entry.rule_id, std::move(message), std::move(span),
                                std::move(subject), std::move(data)));
  }
  void emit_at(const DefectEntry& entry, std::string message, const Node& node, std::string subject,
               json data = json::object()) {
    emit(entry, std::move(message), SourceSpan::of(file_, node.range), std::move(subject),
         std::move(data));
  }
  const std::string& file() const { return file_; }

 private:
  const Catalog& catalog_;
  const std::string& file_;
  std::vector<Finding>& out_;
};

// ---------------------------------------------------------------------------
// Value detectors, shared by playbooks and topologies.

class ValueRule {
 public:
  virtual ~ValueRule() = default;
  virtual void check(const ValueSite& site, Emitter& out) const = 0;
};

std::regex key_regex(const json& params) {
  return std::regex(string_param(params, "key_pattern", "(password|passwd|secret|token)|_key$"),
                    std::regex::ECMAScript | std::regex::icase);
}

bool secret_key(const std::regex& re, const std::vector<std::string>& ignore, const std::string& key) {
  return !contains(ignore, key) && std::regex_search(key, re);
}

class SecretLiteral : public ValueRule {
 public:
  SecretLiteral(const DefectEntry& e, const json& p)
      : entry_(e), key_(key_regex(p)), ignore_(string_list(p, "ignore_keys")) {}
  void check(const ValueSite& s, Emitter& out) const override {
    const Node& v = s.value;
    if (v.is_null() || v.text.empty() || v.as_bool()) return;
    if (v.text.find("{{") != std::string::npos) return;  // templated reference
    if (!secret_key(key_, ignore_, s.key)) return;
    out.emit_at(entry_, "'" + s.key + "' holds a literal secret", v, s.pointer, {{"key", s.key}});
  }

 private:
  const DefectEntry& entry_;
  std::regex key_;
  std::vector<std::string> ignore_;
};

class EmptyPassword : public ValueRule {
 public:
  EmptyPassword(const DefectEntry& e, const json& p)
      : entry_(e), key_(key_regex(p)), ignore_(string_list(p, "ignore_keys")) {}
  void check(const ValueSite& s, Emitter& out) const override {
    const Node& v = s.value;
    if (v.is_plain() || !v.text.empty()) return;
    if (!secret_key(key_, ignore_, s.key)) return;
    out.emit_at(entry_, "'" + s.key + "' is set to the empty string", v, s.pointer, {{"key", s.key}});
  }

 private:
  const DefectEntry& entry_;
  std::regex key_;
  std::vector<std::string> ignore_;
};

class UnrestrictedBind : public ValueRule {
 public:
  UnrestrictedBind(const DefectEntry& e, const json& p)
      : entry_(e), addresses_(string_list(p, "addresses")) {}
  void check(const ValueSite& s, Emitter& out) const override {
    if (!contains(addresses_, s.value.text)) return;
    out.emit_at(entry_, "'" + s.key + "' binds to " + s.value.text, s.value, s.pointer,
                {{"key", s.key}, {"address", s.value.text}});
  }

 private:
  const DefectEntry& entry_;
  std::vector<std::string> addresses_;
};

class PlainHttp : public ValueRule {
 public:
  PlainHttp(const DefectEntry& e, const json& p)
      : entry_(e), loopback_(string_list(p, "loopback_hosts")) {}
  void check(const ValueSite& s, Emitter& out) const override {
    static const std::regex kUrl(R"(http://(\[[^\]]*\]|[^/:\s?#"'\]]+))", std::regex::icase);
    const std::string& t = s.value.text;
    for (auto it = std::sregex_iterator(t.begin(), t.end(), kUrl); it != std::sregex_iterator(); ++it) {
      std::string host = (*it)[1];
      std::transform(host.begin(), host.end(), host.begin(), [](unsigned char c) { return std::tolower(c); });
      if (contains(loopback_, host)) continue;
      out.emit_at(entry_, "plain http URL to " + host, s.value, s.pointer,
                  {{"key", s.key}, {"host", host}, {"value", t}});
      return;
    }
  }

 private:
  const DefectEntry& entry_;
  std::vector<std::string> loopback_;
};

class WeakCrypto : public ValueRule {
 public:
  WeakCrypto(const DefectEntry& e, const json& p)
      : entry_(e),
        key_(string_param(p, "key_pattern", "(hash|digest|checksum|algorithm|cipher)"),
             std::regex::ECMAScript | std::regex::icase),
        algo_("\\b(" + regex_alternation(string_list(p, "algorithms")) + ")\\b",
              std::regex::ECMAScript | std::regex::icase),
        any_(!string_list(p, "algorithms").empty()) {}
  void check(const ValueSite& s, Emitter& out) const override {
    std::smatch m;
    if (!any_ || !std::regex_search(s.key, key_)) return;
    if (!std::regex_search(s.value.text, m, algo_)) return;
    out.emit_at(entry_, "'" + s.key + "' uses " + m.str(1), s.value, s.pointer,
                {{"key", s.key}, {"algorithm", m.str(1)}});
  }

 private:
  const DefectEntry& entry_;
  std::regex key_;
  std::regex algo_;
  bool any_;
};

std::unique_ptr<ValueRule> value_rule(const DefectEntry& e, const json& p) {
  const std::string& d = e.detection.rule;
  if (d == "secret_literal") return std::make_unique<SecretLiteral>(e, p);
  if (d == "empty_password") return std::make_unique<EmptyPassword>(e, p);
  if (d == "unrestricted_bind") return std::make_unique<UnrestrictedBind>(e, p);
  if (d == "plain_http") return std::make_unique<PlainHttp>(e, p);
  if (d == "weak_crypto") return std::make_unique<WeakCrypto>(e, p);
  return nullptr;
}

// ---------------------------------------------------------------------------
// Playbook detectors

struct PlaybookScan {
  const PlaybookModel& pb;
  std::vector<TaskRef> tasks = iter_tasks(pb);
  Emitter& out;
};

const Property* arg(const TaskNode& t, std::string_view name) { return find_property(t.args, name); }

std::string arg_subject(const TaskNode& t, const Property& p) {
  return t.free_form ? t.module_pointer + "#" + p.name : p.pointer;
}

void admin_account(const DefectEntry& e, const json& p, PlaybookScan& s) {
  auto modules = string_list(p, "account_modules");
  auto keys = string_list(p, "account_keys");
  auto admins = string_list(p, "admin_names");
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (!t.module || !contains(modules, short_module_name(*t.module))) continue;
    for (const auto& a : t.args) {
      if (!contains(keys, a.name) || !a.value.is_scalar() || !contains(admins, a.value.text)) continue;
      s.out.emit_at(e, short_module_name(*t.module) + " task uses the " + a.value.text + " account",
                    a.value, arg_subject(t, a), {{"key", a.name}, {"account", a.value.text}});
    }
  }
}

void suspicious_comment(const DefectEntry& e, const json& p, PlaybookScan& s) {
  auto words = string_list(p, "words");
  if (words.empty() || !s.pb.document) return;
  std::regex re("\\b(" + regex_alternation(words) + ")\\b");
  for (const auto& c : s.pb.document->comments) {
    std::smatch m;
    if (!std::regex_search(c.text, m, re)) continue;
    s.out.emit(e, "comment marked " + m.str(1), SourceSpan::of(s.out.file(), c.range),
               "#L" + std::to_string(c.range.start.line), {{"marker", m.str(1)}});
  }
}

void unchecked_download(const DefectEntry& e, const json& p, PlaybookScan& s) {
  auto modules = string_list(p, "modules");
  auto dest_modules = string_list(p, "dest_modules");
  auto checksum_keys = string_list(p, "checksum_keys");
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (!t.module) continue;
    std::string m = short_module_name(*t.module);
    bool download = contains(modules, m) || (contains(dest_modules, m) && arg(t, "dest"));
    if (!download) continue;
    bool pinned = std::any_of(checksum_keys.begin(), checksum_keys.end(),
                              [&](const std::string& k) { return arg(t, k) != nullptr; });
    if (pinned) continue;
    s.out.emit(e, m + " downloads without a checksum", t.module_span, t.module_pointer, {{"module", m}});
  }
}

void unnamed_task(const DefectEntry& e, const json&, PlaybookScan& s) {
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (t.kind != TaskNode::Kind::Task || (t.name && !t.name->empty())) continue;
    std::string m = short_module_name(t.module.value_or(""));
    s.out.emit(e, m + " task has no name", t.span, t.pointer, {{"module", m}});
  }
}

void command_module(const DefectEntry& e, const json& p, PlaybookScan& s) {
  auto modules = string_list(p, "modules");
  auto allow = string_list(p, "allow_args");
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (!t.module) continue;
    std::string m = short_module_name(*t.module);
    if (!contains(modules, m)) continue;
    bool guarded = std::any_of(allow.begin(), allow.end(),
                               [&](const std::string& k) { return arg(t, k) != nullptr; });
    if (guarded) continue;
    s.out.emit(e, "task runs " + m + " instead of a module", t.module_span, t.module_pointer,
               {{"module", m}});
  }
}

void ignore_errors(const DefectEntry& e, const json&, PlaybookScan& s) {
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (!t.ignore_errors) continue;
    s.out.emit(e, "task ignores errors", t.ignore_errors_span,
               yaml::pointer_append(t.pointer, "ignore_errors"));
  }
}

void deprecated_module(const DefectEntry& e, const json& p, PlaybookScan& s) {
  auto it = p.find("deprecated");
  if (it == p.end() || !it->is_object()) return;
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (!t.module) continue;
    std::string m = short_module_name(*t.module);
    auto r = it->find(m);
    if (r == it->end()) continue;
    std::string replacement = r->is_string() ? r->get<std::string>() : std::string();
    s.out.emit(e, "module " + m + " is deprecated" + (replacement.empty() ? "" : ", use " + replacement),
               t.module_span, t.module_pointer, {{"module", m}, {"replacement", replacement}});
  }
}

const std::regex& boolean_comparison_regex() {
  static const std::regex kRe(R"(==\s*(true|false|True|False)\b)");
  return kRe;
}

void boolean_comparison(const DefectEntry& e, const json&, PlaybookScan& s) {
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (!t.when_expr || !std::regex_search(*t.when_expr, boolean_comparison_regex())) continue;
    s.out.emit(e, "condition compares with a boolean literal", t.when_span,
               yaml::pointer_append(t.pointer, "when"), {{"condition", *t.when_expr}});
  }
}

void long_play(const DefectEntry& e, const json& p, PlaybookScan& s) {
  long long threshold = int_param(p, "threshold", 20);
  for (std::size_t i = 0; i < s.pb.plays.size(); ++i) {
    long long n = std::count_if(s.tasks.begin(), s.tasks.end(), [&](const TaskRef& r) {
      return r.play == i && !r.in_handlers && r.task->kind == TaskNode::Kind::Task;
    });
    if (n <= threshold) continue;
    const Play& play = s.pb.plays[i];
    s.out.emit(e, "play has " + std::to_string(n) + " tasks (threshold " + std::to_string(threshold) + ")",
               play.span, play.pointer, {{"tasks", n}, {"threshold", threshold}});
  }
}

// Canonical text of a task's module invocation, used to find duplicates.
std::string invocation_key(const TaskNode& t) {
  std::vector<std::pair<std::string, std::string>> args;
  for (const auto& a : t.args) args.emplace_back(a.name, to_json(a.value).dump());
  std::sort(args.begin(), args.end());
  json j = {short_module_name(*t.module), args};
  return j.dump();
}

void duplicate_task(const DefectEntry& e, const json&, PlaybookScan& s) {
  std::map<std::pair<std::size_t, std::string>, const TaskNode*> first;
  for (const auto& ref : s.tasks) {
    const TaskNode& t = *ref.task;
    if (ref.in_handlers || !t.module || short_module_name(*t.module) == "meta") continue;
    auto [it, fresh] = first.try_emplace({ref.play, invocation_key(t)}, &t);
    if (fresh) continue;
    s.out.emit(e, "task repeats " + short_module_name(*t.module) + " with the same arguments",
               t.span, t.pointer, {{"first", it->second->pointer}});
  }
}

void monolithic_playbook(const DefectEntry& e, const json& p, PlaybookScan& s) {
  long long max_plays = int_param(p, "max_plays", 3);
  long long max_lines = int_param(p, "max_lines", 200);
  auto plays = static_cast<long long>(s.pb.plays.size());
  auto lines = static_cast<long long>(s.pb.line_count);
  if (plays <= max_plays || lines <= max_lines) return;
  s.out.emit(e,
             "playbook has " + std::to_string(plays) + " plays and " + std::to_string(lines) + " lines",
             SourceSpan::at_start(s.pb.file), "", {{"plays", plays}, {"lines", lines}});
}

using PlaybookDetector = void (*)(const DefectEntry&, const json&, PlaybookScan&);

PlaybookDetector playbook_detector(const std::string& name) {
  static const std::map<std::string, PlaybookDetector> kDetectors = {
      {"admin_account", admin_account},       {"suspicious_comment", suspicious_comment},
      {"unchecked_download", unchecked_download}, {"unnamed_task", unnamed_task},
      {"command_module", command_module},     {"ignore_errors", ignore_errors},
      {"deprecated_module", deprecated_module}, {"boolean_comparison", boolean_comparison},
      {"long_play", long_play},               {"duplicate_task", duplicate_task},
      {"monolithic_playbook", monolithic_playbook}};
  auto it = kDetectors.find(name);
  return it == kDetectors.end() ? nullptr : it->second;
}

// ---------------------------------------------------------------------------
// Topology walk

void topology_values(const TopologyModel& t, const SiteVisitor& visit) {
  for (const auto& tmpl : t.node_templates) {
    for (const auto& p : tmpl.properties) walk_values(p.value, p.pointer, p.name, true, visit);
    for (const auto& [cap, node] : tmpl.capabilities) {
      const Node* props = node.is_map() ? node.find("properties") : nullptr;
      if (!props) continue;
      std::string ptr = yaml::pointer_append(
          yaml::pointer_append(yaml::pointer_append(tmpl.pointer, "capabilities"), cap), "properties");
      walk_values(*props, ptr, cap, true, visit);
    }
  }
  for (const auto& in : t.inputs) {
    const Node* def = in.value.is_map() ? in.value.find("default") : nullptr;
    if (def) walk_values(*def, yaml::pointer_append(in.pointer, "default"), in.name, true, visit);
  }
}

void tosca_admin_account(const DefectEntry& e, const json& p, const TopologyModel& t, Emitter& out) {
  auto keys = string_list(p, "tosca_keys");
  auto admins = string_list(p, "admin_names");
  for (const auto& tmpl : t.node_templates) {
    for (const auto& prop : tmpl.properties) {
      if (!contains(keys, prop.name) || !prop.value.is_scalar() || !contains(admins, prop.value.text)) continue;
      out.emit_at(e, "node " + tmpl.name + " uses the " + prop.value.text + " account", prop.value,
                  prop.pointer, {{"key", prop.name}, {"account", prop.value.text}});
    }
  }
}

void god_node(const DefectEntry& e, const json& p, const TopologyModel& t, Emitter& out) {
  long long threshold = int_param(p, "threshold", 10);
  for (const auto& tmpl : t.node_templates) {
    auto n = static_cast<long long>(tmpl.requirements.size());
    if (n <= threshold) continue;
    out.emit(e,
             "node " + tmpl.name + " has " + std::to_string(n) + " requirements (threshold " +
                 std::to_string(threshold) + ")",
             tmpl.name_span, tmpl.pointer, {{"requirements", n}, {"threshold", threshold}});
  }
}

}  // namespace

std::vector<Finding> detect_playbook_smells(const PlaybookModel& playbook, const RuleContext& ctx) {
  std::vector<Finding> findings;
  Emitter out(ctx.catalog(), playbook.file, findings);
  PlaybookScan scan{playbook, iter_tasks(playbook), out};
  std::vector<std::unique_ptr<ValueRule>> value_rules;
  for (const auto& entry : ctx.catalog().entries) {
    if (!entry.has_target(Target::Ansible) || !ctx.enabled(entry.rule_id)) continue;
    json params = ctx.parameters(entry);
    if (auto rule = value_rule(entry, params)) {
      value_rules.push_back(std::move(rule));
    } else if (auto detector = playbook_detector(entry.detection.rule)) {
      detector(entry, params, scan);
    }
  }
  if (!value_rules.empty() && playbook.document) {
    walk_values(playbook.document->root, "", "", false, [&](const ValueSite& site) {
      for (const auto& r : value_rules) r->check(site, out);
    });
  }
  sort_and_dedupe(findings);
  return findings;
}

std::vector<Finding> detect_topology_smells(const TopologyModel& topology, const RuleContext& ctx) {
  std::vector<Finding> findings;
  Emitter out(ctx.catalog(), topology.file, findings);
  std::vector<std::unique_ptr<ValueRule>> value_rules;
  for (const auto& entry : ctx.catalog().entries) {
    if (entry.cls != DefectClass::Smell) continue;
    if (!entry.has_target(Target::Tosca) || !ctx.enabled(entry.rule_id)) continue;
    json params = ctx.parameters(entry);
    if (auto rule = value_rule(entry, params)) {
      value_rules.push_back(std::move(rule));
    } else if (entry.detection.rule == "admin_account") {
      tosca_admin_account(entry, params, topology, out);
    } else if (entry.detection.rule == "god_node") {
      god_node(entry, params, topology, out);
    }
  }
  if (!value_rules.empty()) {
    topology_values(topology, [&](const ValueSite& site) {
      for (const auto& r : value_rules) r->check(site, out);
    });
  }
  sort_and_dedupe(findings);
  return findings;
}

}  // namespace dqa
