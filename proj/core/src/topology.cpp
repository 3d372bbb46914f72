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

#include "deployqa/topology.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <regex>
#include <set>

#include "deployqa/csar.hpp"

namespace dqa {

namespace resources {
extern const std::string_view normative_types;
}

const TopologyModel& normative_types() {
  static const TopologyModel kTypes = parse_tosca(resources::normative_types, "<normative>");
  return kTypes;
}

DependencyGraph dependency_graph(const TopologyModel& topology) {
  DependencyGraph g;
  std::set<std::string> names;
  for (const auto& t : topology.node_templates) {
    if (names.insert(t.name).second) g.vertices.push_back(t.name);
  }
  std::set<std::string> done;
  for (const auto& t : topology.node_templates) {
    if (!done.insert(t.name).second) continue;  // later duplicates are E007 only
    for (const auto& r : t.requirements) {
      if (!r.target_node.empty() && names.count(r.target_node)) {
        g.edges.push_back({t.name, r.target_node, r.name});
      }
    }
  }
  return g;
}

std::vector<std::vector<std::string>> detect_cycles(const DependencyGraph& graph) {
  const std::size_t n = graph.vertices.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(graph.vertices[i], i);
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<std::vector<std::string>> cycles;
  std::set<std::size_t> self_loops;
  for (const auto& e : graph.edges) {
    std::size_t s = index.at(e.source);
    std::size_t t = index.at(e.target);
    if (s == t) {
      self_loops.insert(s);
    } else {
      adj[s].push_back(t);
    }
  }
  for (std::size_t v : self_loops) cycles.push_back({graph.vertices[v]});

  // Tarjan's algorithm, iterative to stay safe on deep graphs.
  std::vector<long> low(n, -1), num(n, -1), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  long counter = 0;
  long comps = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
    while (!work.empty()) {
      auto& [v, i] = work.back();
      if (i == 0 && num[v] == -1) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (i < adj[v].size()) {
        std::size_t w = adj[v][i++];
        if (num[w] == -1) {
          work.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], num[w]);
        }
        continue;
      }
      if (low[v] == num[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      std::size_t done = v;
      work.pop_back();
      if (!work.empty()) low[work.back().first] = std::min(low[work.back().first], low[done]);
    }
  }

  std::map<long, std::vector<std::size_t>> members;
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  for (const auto& [c, vs] : members) {
    if (vs.size() < 2) continue;
    // Shortest cycle through the smallest vertex, found by BFS inside the
    // component. Neighbours are visited in name order for determinism.
    std::size_t start = *std::min_element(vs.begin(), vs.end(), [&](std::size_t a, std::size_t b) {
      return graph.vertices[a] < graph.vertices[b];
    });
    std::vector<long> parent(n, -1);
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = true;
    long last = -1;
    while (!q.empty() && last < 0) {
      std::size_t v = q.front();
      q.pop();
      std::vector<std::size_t> next;
      for (std::size_t w : adj[v]) {
        if (comp[w] == c) next.push_back(w);
      }
      std::sort(next.begin(), next.end(), [&](std::size_t a, std::size_t b) {
        return graph.vertices[a] < graph.vertices[b];
      });
      for (std::size_t w : next) {
        if (w == start) {
          last = static_cast<long>(v);
          break;
        }
        if (!seen[w]) {
          seen[w] = true;
          parent[w] = static_cast<long>(v);
          q.push(w);
        }
      }
    }
    std::vector<std::string> cycle;
    for (long v = last; v != -1; v = parent[v]) cycle.push_back(graph.vertices[v]);
    std::reverse(cycle.begin(), cycle.end());
    cycles.push_back(std::move(cycle));
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

namespace {

struct TypeEnv {
  std::map<std::string, const TypeDef*> nodes;
  std::map<std::string, const TypeDef*> caps;

  explicit TypeEnv(const TopologyModel& t) {
    for (const auto& [name, def] : t.node_types) nodes.emplace(name, &def);
    for (const auto& [name, def] : t.capability_types) caps.emplace(name, &def);
    const auto& norm = normative_types();
    for (const auto& [name, def] : norm.node_types) nodes.emplace(name, &def);
    for (const auto& [name, def] : norm.capability_types) caps.emplace(name, &def);
  }

  // Most-derived first; stops at unknown types and at cycles.
  static std::vector<const TypeDef*> chain(const std::map<std::string, const TypeDef*>& types,
                                           const std::string& name) {
    std::vector<const TypeDef*> out;
    std::set<std::string> seen;
    std::string cur = name;
    while (seen.insert(cur).second) {
      auto it = types.find(cur);
      if (it == types.end()) break;
      out.push_back(it->second);
      if (!it->second->derived_from) break;
      cur = *it->second->derived_from;
    }
    return out;
  }

  static bool derives(const std::map<std::string, const TypeDef*>& types, const std::string& type,
                      const std::string& base) {
    if (type == base) return true;
    for (const TypeDef* t : chain(types, type)) {
      if (t->name == base) return true;
    }
    return false;
  }
};

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : sep) + s;
  return out;
}

bool value_matches(const yaml::Node& value, const yaml::Node& candidate) {
  if (value.is_scalar() && candidate.is_scalar()) {
    auto a = value.as_float();
    auto b = candidate.as_float();
    if (a && b) return *a == *b;
    return value.text == candidate.text;
  }
  return yaml::structurally_equal(value, candidate);
}

// Empty when the value is acceptable, else a description of the problem.
std::string check_value(const PropertySchema& schema, const yaml::Node& v) {
  switch (schema.kind) {
    case PropertyKind::String:
      if (!v.is_scalar() || v.is_null()) return "expected a string";
      break;
    case PropertyKind::Integer:
      if (!v.is_scalar() || !v.is_plain() || !v.as_int()) return "expected an integer, found '" + v.text + "'";
      break;
    case PropertyKind::Float:
      if (!v.is_scalar() || !v.is_plain() || !v.as_float()) return "expected a float, found '" + v.text + "'";
      break;
    case PropertyKind::Boolean:
      if (!v.is_scalar() || !v.is_plain() || !v.as_bool()) return "expected a boolean, found '" + v.text + "'";
      break;
    case PropertyKind::List:
      if (!v.is_seq()) return "expected a list";
      break;
    case PropertyKind::Map:
      if (!v.is_map()) return "expected a map";
      break;
    case PropertyKind::Any: break;
  }
  for (const auto& c : schema.constraints) {
    if (c.min || c.max) {
      auto d = v.is_scalar() && v.is_plain() ? v.as_float() : std::nullopt;
      if (!d) return "'" + c.text + "' needs a number";
      if (c.min && (c.min_exclusive ? !(*d > *c.min) : !(*d >= *c.min))) return "violates " + c.text;
      if (c.max && (c.max_exclusive ? !(*d < *c.max) : !(*d <= *c.max))) return "violates " + c.text;
    }
    if (!c.valid_values.empty()) {
      bool ok = std::any_of(c.valid_values.begin(), c.valid_values.end(),
                            [&](const yaml::Node& cand) { return value_matches(v, cand); });
      if (!ok) return "violates " + c.text;
    }
    if (c.pattern) {
      bool ok = false;
      try {
        ok = v.is_scalar() && std::regex_match(v.text, std::regex(*c.pattern, std::regex::ECMAScript));
      } catch (const std::regex_error&) {
        return "invalid pattern " + *c.pattern;
      }
      if (!ok) return "violates " + c.text;
    }
    if (c.min_length || c.max_length) {
      std::size_t len = v.is_scalar() ? v.text.size() : v.size();
      if ((c.min_length && len < *c.min_length) || (c.max_length && len > *c.max_length)) {
        return "violates " + c.text;
      }
    }
  }
  return {};
}

class Verifier {
 public:
  Verifier(const TopologyModel& t, const Catalog& c) : topo_(t), catalog_(c), env_(t) {}

  std::vector<Finding> run() {
    check_dangling();
    check_capabilities();
    check_undefined_types();
    check_type_cycles();
    check_missing_properties();
    check_constraints();
    check_dependency_cycles();
    check_duplicates();
    sort_and_dedupe(out_);
    return std::move(out_);
  }

 private:
  void emit(const char* rule, std::string msg, SourceSpan span, std::string subject,
            nlohmann::json data = nlohmann::json::object()) {
    out_.push_back(make_finding(catalog_, rule, std::move(msg), std::move(span), std::move(subject),
                                std::move(data)));
  }

  SourceSpan span_of(const Property& p) const {
    const auto& r = p.value.range;
    SourceSpan s = SourceSpan::of(p.key_span.file, r);
    if (p.value.is_null()) s = p.key_span;
    return s;
  }

  void check_dangling() {
    for (const auto& t : topo_.node_templates) {
      for (const auto& r : t.requirements) {
        if (r.target_node.empty() || resolve_node(topo_, r.target_node)) continue;
        emit("E001",
             "requirement '" + r.name + "' of '" + t.name + "' targets undefined node '" +
                 r.target_node + "'",
             r.span, r.pointer, {{"node", t.name}, {"requirement", r.name}, {"target", r.target_node}});
      }
    }
  }

  const RequirementDef* requirement_def(const std::string& type, const std::string& name) const {
    for (const TypeDef* t : TypeEnv::chain(env_.nodes, type)) {
      for (const auto& r : t->requirement_defs) {
        if (r.name == name) return &r;
      }
    }
    return nullptr;
  }

  std::vector<const CapabilityDef*> capabilities_of(const std::string& type) const {
    std::vector<const CapabilityDef*> out;
    std::set<std::string> names;
    for (const TypeDef* t : TypeEnv::chain(env_.nodes, type)) {
      for (const auto& [name, def] : t->capability_defs) {
        if (names.insert(name).second) out.push_back(&def);
      }
    }
    return out;
  }

  void check_capabilities() {
    for (const auto& t : topo_.node_templates) {
      if (!env_.nodes.count(t.type_name)) continue;
      for (const auto& r : t.requirements) {
        const NodeTemplate* target = r.target_node.empty() ? nullptr : resolve_node(topo_, r.target_node);
        if (!target || !env_.nodes.count(target->type_name)) continue;
        const RequirementDef* def = requirement_def(t.type_name, r.name);
        std::string required = def ? def->capability : std::string();
        std::string cap_name;
        if (!r.capability_name.empty()) {
          if (env_.caps.count(r.capability_name)) {
            required = r.capability_name;
          } else {
            cap_name = r.capability_name;
          }
        }
        auto caps = capabilities_of(target->type_name);
        bool ok = true;
        std::string found;
        if (!cap_name.empty()) {
          auto it = std::find_if(caps.begin(), caps.end(),
                                 [&](const CapabilityDef* c) { return c->name == cap_name; });
          if (it == caps.end()) {
            ok = false;
            found = "no capability named '" + cap_name + "'";
          } else if (!required.empty() && !TypeEnv::derives(env_.caps, (*it)->type, required)) {
            ok = false;
            found = (*it)->type;
          }
        } else if (!required.empty()) {
          ok = std::any_of(caps.begin(), caps.end(), [&](const CapabilityDef* c) {
            return TypeEnv::derives(env_.caps, c->type, required);
          });
          std::vector<std::string> offered;
          for (const auto* c : caps) offered.push_back(c->type);
          found = offered.empty() ? "none" : join(offered, ", ");
        }
        if (ok && def && !def->node.empty() && !TypeEnv::derives(env_.nodes, target->type_name, def->node)) {
          emit("E002",
               "requirement '" + r.name + "' of '" + t.name + "' needs a node of type " + def->node +
                   ", but '" + target->name + "' is " + target->type_name,
               r.span, r.pointer,
               {{"node", t.name}, {"requirement", r.name}, {"target", target->name},
                {"expected_node_type", def->node}, {"found_node_type", target->type_name}});
          continue;
        }
        if (ok) continue;
        emit("E002",
             "requirement '" + r.name + "' of '" + t.name + "' needs capability " +
                 (required.empty() ? cap_name : required) + ", '" + target->name + "' offers " + found,
             r.span, r.pointer,
             {{"node", t.name}, {"requirement", r.name}, {"target", target->name},
              {"expected", required.empty() ? cap_name : required}, {"found", found}});
      }
    }
  }

  std::string remote_note() const {
    std::vector<std::string> remote;
    for (const auto& imp : topo_.imports) {
      if (imp.remote) remote.push_back(imp.path);
    }
    return remote.empty() ? "" : " (remote imports are not fetched: " + join(remote, ", ") + ")";
  }

  void check_undefined_types() {
    for (const auto& t : topo_.node_templates) {
      if (t.type_name.empty()) {
        emit("E003", "node template '" + t.name + "' has no type", t.name_span,
             yaml::pointer_append(t.pointer, "type"), {{"node", t.name}});
      } else if (!env_.nodes.count(t.type_name)) {
        emit("E003", "node template '" + t.name + "' uses undefined type " + t.type_name + remote_note(),
             t.type_span, yaml::pointer_append(t.pointer, "type"),
             {{"node", t.name}, {"type", t.type_name}});
      }
    }
    auto check_section = [&](const std::map<std::string, TypeDef>& section,
                             const std::map<std::string, const TypeDef*>& universe) {
      for (const auto& [name, def] : section) {
        if (def.derived_from && !universe.count(*def.derived_from)) {
          emit("E003", "type " + name + " derives from undefined type " + *def.derived_from + remote_note(),
               def.span, yaml::pointer_append(def.pointer, "derived_from"),
               {{"type", name}, {"undefined", *def.derived_from}});
        }
      }
    };
    check_section(topo_.node_types, env_.nodes);
    check_section(topo_.capability_types, env_.caps);
    for (const auto& [name, def] : topo_.node_types) {
      for (const auto& [cname, cap] : def.capability_defs) {
        if (!cap.type.empty() && !env_.caps.count(cap.type)) {
          emit("E003", "capability '" + cname + "' of " + name + " has undefined type " + cap.type,
               cap.span, yaml::pointer_append(yaml::pointer_append(def.pointer, "capabilities"), cname),
               {{"type", name}, {"undefined", cap.type}});
        }
      }
      for (std::size_t i = 0; i < def.requirement_defs.size(); ++i) {
        const auto& r = def.requirement_defs[i];
        std::string ptr = yaml::pointer_append(yaml::pointer_append(def.pointer, "requirements"), i);
        if (!r.capability.empty() && !env_.caps.count(r.capability)) {
          emit("E003", "requirement '" + r.name + "' of " + name + " needs undefined capability type " + r.capability,
               r.span, ptr, {{"type", name}, {"undefined", r.capability}});
        } else if (!r.node.empty() && !env_.nodes.count(r.node)) {
          emit("E003", "requirement '" + r.name + "' of " + name + " needs undefined node type " + r.node,
               r.span, ptr, {{"type", name}, {"undefined", r.node}});
        }
      }
    }
  }

  void check_type_cycles() {
    auto scan = [&](const std::map<std::string, TypeDef>& section) {
      std::set<std::string> reported;
      for (const auto& [name, def] : section) {
        std::vector<std::string> path;
        std::string cur = name;
        std::set<std::string> seen;
        while (seen.insert(cur).second) {
          path.push_back(cur);
          auto it = section.find(cur);
          if (it == section.end() || !it->second.derived_from) break;
          cur = *it->second.derived_from;
        }
        if (cur != name) continue;  // not on a cycle, or the cycle is further up
        std::vector<std::string> cycle = path;
        std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
        if (!reported.insert(cycle.front()).second) continue;
        const TypeDef& head = section.at(cycle.front());
        emit("E003a", "cyclic type inheritance: " + join(cycle, " -> ") + " -> " + cycle.front(),
             head.span, yaml::pointer_append(head.pointer, "derived_from"), {{"cycle", cycle}});
      }
    };
    scan(topo_.node_types);
    scan(topo_.capability_types);
  }

  // Property definitions visible to a template, most-derived wins.
  std::vector<const PropertySchema*> schemas_of(const std::string& type) const {
    std::vector<const PropertySchema*> out;
    std::set<std::string> names;
    for (const TypeDef* t : TypeEnv::chain(env_.nodes, type)) {
      for (const auto& p : t->properties) {
        if (names.insert(p.name).second) out.push_back(&p);
      }
    }
    return out;
  }

  void check_missing_properties() {
    for (const auto& t : topo_.node_templates) {
      if (!env_.nodes.count(t.type_name)) continue;
      for (const PropertySchema* s : schemas_of(t.type_name)) {
        if (!s->required || s->has_default || find_property(t.properties, s->name)) continue;
        emit("E004", "node template '" + t.name + "' does not set required property '" + s->name + "'",
             t.name_span, yaml::pointer_append(yaml::pointer_append(t.pointer, "properties"), s->name),
             {{"node", t.name}, {"property", s->name}});
      }
    }
  }

  void check_constraints() {
    for (const auto& t : topo_.node_templates) {
      if (!env_.nodes.count(t.type_name)) continue;
      auto schemas = schemas_of(t.type_name);
      for (const auto& p : t.properties) {
        auto it = std::find_if(schemas.begin(), schemas.end(),
                               [&](const PropertySchema* s) { return s->name == p.name; });
        if (it == schemas.end() || is_function_ref(p.value)) continue;
        std::string problem = check_value(**it, p.value);
        if (problem.empty()) continue;
        emit("E005", "property '" + p.name + "' of '" + t.name + "': " + problem, span_of(p), p.pointer,
             {{"node", t.name}, {"property", p.name}, {"type", (*it)->type_name}});
      }
    }
  }

  void check_dependency_cycles() {
    auto graph = dependency_graph(topo_);
    for (const auto& cycle : detect_cycles(graph)) {
      const NodeTemplate* head = resolve_node(topo_, cycle.front());
      const std::string& next = cycle.size() > 1 ? cycle[1] : cycle.front();
      const Requirement* edge = nullptr;
      for (const auto& r : head->requirements) {
        if (r.target_node == next) {
          edge = &r;
          break;
        }
      }
      emit("E006", "dependency cycle: " + join(cycle, " -> ") + " -> " + cycle.front(),
           edge ? edge->span : head->name_span, edge ? edge->pointer : head->pointer,
           {{"cycle", cycle}});
    }
  }

  void check_duplicates() {
    std::map<std::string, int> count;
    for (const auto& t : topo_.node_templates) {
      int k = ++count[t.name];
      if (k < 2) continue;
      emit("E007", "node template '" + t.name + "' is defined more than once", t.name_span,
           t.pointer + "#" + std::to_string(k), {{"node", t.name}, {"occurrence", k}});
    }
  }

  const TopologyModel& topo_;
  const Catalog& catalog_;
  TypeEnv env_;
  std::vector<Finding> out_;
};

}  // namespace

std::vector<Finding> verify_topology(const TopologyModel& topology, const Catalog& catalog) {
  return Verifier(topology, catalog).run();
}

}  // namespace dqa
