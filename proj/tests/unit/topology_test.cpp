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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "deployqa/csar.hpp"
#include "deployqa/topology.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace dqa;

namespace {

std::vector<std::string> rules_of(const std::vector<Finding>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.rule_id);
  return out;
}

TopologyModel topology(const std::string& templates) {
  return parse_tosca("tosca_definitions_version: tosca_simple_yaml_1_3\ntopology_template:\n"
                     "  node_templates:\n" + templates,
                     "s.yaml");
}

// Topology of Root nodes with the given dependency edges.
TopologyModel graph_topology(const std::vector<std::string>& names,
                             const std::vector<std::pair<std::string, std::string>>& edges) {
  std::string text;
  for (const auto& n : names) {
    text += "    " + n + ":\n      type: tosca.nodes.Root\n";
    bool first = true;
    for (const auto& [s, t] : edges) {
      if (s != n) continue;
      if (first) text += "      requirements:\n";
      first = false;
      text += "        - dependency: " + t + "\n";
    }
  }
  return topology(text);
}

}  // namespace

TEST_CASE("dependency graph") {
  auto t = graph_topology({"A", "B", "C"}, {{"A", "B"}, {"B", "C"}});
  auto g = dependency_graph(t);
  CHECK(g.vertices == std::vector<std::string>{"A", "B", "C"});
  CHECK(g.edges.size() == 2);
  auto dangling = graph_topology({"A"}, {{"A", "Z"}});
  CHECK(dependency_graph(dangling).edges.empty());
}

TEST_CASE("dependency graph edges match a scan of all requirements") {
  std::mt19937 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> names;
    for (int i = 0; i < 10; ++i) names.push_back("n" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < 14; ++i) {
      std::string tgt = rng() % 5 == 0 ? "missing" + std::to_string(i) : names[rng() % 10];
      edges.emplace_back(names[rng() % 10], tgt);
    }
    auto t = graph_topology(names, edges);
    std::multiset<std::pair<std::string, std::string>> expected;
    for (const auto& n : t.node_templates) {
      for (const auto& r : n.requirements) {
        if (r.target_node.rfind("missing", 0) != 0) expected.emplace(n.name, r.target_node);
      }
    }
    std::multiset<std::pair<std::string, std::string>> got;
    for (const auto& e : dependency_graph(t).edges) got.emplace(e.source, e.target);
    CHECK(got == expected);
  }
}

TEST_CASE("detect_cycles basic shapes") {
  DependencyGraph g{{"A", "B"}, {{"A", "B", "d"}, {"B", "A", "d"}}};
  CHECK(detect_cycles(g) == std::vector<std::vector<std::string>>{{"A", "B"}});
  DependencyGraph dag{{"A", "B", "C"}, {{"A", "B", "d"}, {"B", "C", "d"}, {"A", "C", "d"}}};
  CHECK(detect_cycles(dag).empty());
  DependencyGraph two{{"D", "C", "B", "A"},
                      {{"D", "C", "d"}, {"C", "D", "d"}, {"B", "A", "d"}, {"A", "B", "d"}}};
  CHECK(detect_cycles(two) == std::vector<std::vector<std::string>>{{"A", "B"}, {"C", "D"}});
  DependencyGraph self{{"A"}, {{"A", "A", "d"}}};
  CHECK(detect_cycles(self) == std::vector<std::vector<std::string>>{{"A"}});
}

TEST_CASE("detect_cycles agrees with brute-force enumeration") {
  std::mt19937 rng(3);
  for (int round = 0; round < 400; ++round) {
    int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::string> vs;
    for (int i = 0; i < n; ++i) vs.push_back(std::string(1, static_cast<char>('a' + i)));
    std::shuffle(vs.begin(), vs.end(), rng);
    DependencyGraph g{vs, {}};
    std::vector<oracle::Edge> edges;
    int m = static_cast<int>(rng() % (n * 2 + 1));
    for (int i = 0; i < m; ++i) {
      std::string s = vs[rng() % n], t = vs[rng() % n];
      g.edges.push_back({s, t, "d"});
      edges.emplace_back(s, t);
    }
    auto cycles = detect_cycles(g);
    auto all = oracle::elementary_cycles(vs, edges);
    auto comps = oracle::components(vs, edges);
    std::size_t expected = 0;
    for (const auto& c : comps) expected += c.size() > 1;
    for (const auto& v : vs) {
      if (all.count({v})) ++expected;
    }
    CAPTURE(round);
    CHECK(cycles.size() == expected);
    CHECK(std::is_sorted(cycles.begin(), cycles.end()));
    for (const auto& c : cycles) {
      // A real elementary cycle, starting at the smallest vertex of its
      // component, and no longer than the shortest cycle through it.
      CHECK(all.count(c) == 1);
      if (c.size() > 1) {
        for (const auto& comp : comps) {
          if (comp.count(c.front())) CHECK(*comp.begin() == c.front());
        }
        std::size_t shortest = SIZE_MAX;
        for (const auto& other : all) {
          if (other.front() == c.front() && other.size() > 1) shortest = std::min(shortest, other.size());
        }
        CHECK(c.size() == shortest);
      }
    }
  }
}

TEST_CASE("verify_topology on fixtures") {
  for (const char* rule : {"E001", "E002", "E003", "E003a", "E004", "E005", "E006", "E007"}) {
    CAPTURE(rule);
    auto a = load_csar(testing::fixture(std::string("errors/") + rule));
    auto fs = verify_topology(a.topology, builtin_catalog());
    CHECK(rules_of(fs) == std::vector<std::string>{rule});
  }
}

TEST_CASE("E001 lands on the requirement") {
  auto a = load_csar(testing::fixture("errors/E001"));
  auto fs = verify_topology(a.topology, builtin_catalog());
  REQUIRE(fs.size() == 1);
  std::string text = testing::read_file(testing::fixture("errors/E001/service.yaml"));
  auto at = text.find("- host: web");
  REQUIRE(at != std::string::npos);
  CHECK(fs[0].span.start_line == 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + at, '\n')));
  CHECK(fs[0].subject == "/topology_template/node_templates/app/requirements/0");
}

TEST_CASE("triangle yields one E006 listing the cycle") {
  auto a = load_csar(testing::fixture("cyclic"));
  auto fs = verify_topology(a.topology, builtin_catalog());
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].rule_id == "E006");
  CHECK(fs[0].data["cycle"] == nlohmann::json({"A", "B", "C"}));
}

TEST_CASE("golden corpus is clean") {
  for (const char* name : {"golden/webapp", "golden/hpc", "golden/minimal", "linear"}) {
    CAPTURE(name);
    auto a = load_csar(testing::fixture(name));
    CHECK(verify_topology(a.topology, builtin_catalog()).empty());
  }
  CHECK(verify_topology(TopologyModel{}, builtin_catalog()).empty());
}

TEST_CASE("constraint checks") {
  auto t = parse_tosca(R"(node_types:
  x.T:
    derived_from: tosca.nodes.Root
    properties:
      n: {type: integer, constraints: [{greater_or_equal: 2}]}
      f: {type: float, required: false}
      b: {type: boolean, required: false}
      s: {type: string, required: false, constraints: [{pattern: "[a-z]+"}, {max_length: 4}]}
      e: {type: string, required: false, constraints: [{valid_values: [a, b]}]}
      l: {type: list, required: false, constraints: [{min_length: 1}]}
      m: {type: map, required: false}
topology_template:
  node_templates:
    ok:
      type: x.T
      properties: {n: 2, f: 1, b: true, s: abc, e: a, l: [1], m: {k: v}}
    bad_n:
      type: x.T
      properties: {n: 1}
    bad_kind:
      type: x.T
      properties: {n: two}
    bad_bool:
      type: x.T
      properties: {n: 3, b: "yes"}
    bad_pattern:
      type: x.T
      properties: {n: 3, s: ABC}
    bad_len:
      type: x.T
      properties: {n: 3, s: abcde}
    bad_enum:
      type: x.T
      properties: {n: 3, e: c}
    bad_list:
      type: x.T
      properties: {n: 3, l: []}
    bad_map:
      type: x.T
      properties: {n: 3, m: [1]}
    fn:
      type: x.T
      properties: {n: {get_input: count}, s: {concat: [a, b]}}
)",
                       "c.yaml");
  auto fs = verify_topology(t, builtin_catalog());
  std::vector<std::string> subjects;
  for (const auto& f : fs) {
    CHECK(f.rule_id == "E005");
    subjects.push_back(f.data["node"]);
  }
  CHECK(subjects == std::vector<std::string>{"bad_n", "bad_kind", "bad_bool", "bad_pattern", "bad_len",
                                             "bad_enum", "bad_list", "bad_map"});
}

TEST_CASE("capability matching follows derived_from") {
  auto ok = topology(R"(    vm:
      type: tosca.nodes.Compute
    dbms:
      type: tosca.nodes.DBMS
      requirements:
        - host: vm
    lb:
      type: tosca.nodes.LoadBalancer
      requirements:
        - application: vm
        - dependency: {node: dbms, capability: feature}
)");
  CHECK(verify_topology(ok, builtin_catalog()).empty());
  auto bad = topology(R"(    vm:
      type: tosca.nodes.Compute
    net:
      type: tosca.nodes.network.Network
    dbms:
      type: tosca.nodes.DBMS
      requirements:
        - host: net
        - dependency: {node: vm, capability: nothing_here}
)");
  auto fs = verify_topology(bad, builtin_catalog());
  CHECK(rules_of(fs) == std::vector<std::string>{"E002", "E002"});
}

TEST_CASE("remote imports are noted on undefined types") {
  auto t = parse_tosca(R"(imports:
  - https://example.org/types.yaml
topology_template:
  node_templates:
    x:
      type: remote.Type
)",
                       "r.yaml");
  auto fs = verify_topology(t, builtin_catalog());
  REQUIRE(fs.size() == 1);
  CHECK(fs[0].rule_id == "E003");
  CHECK(fs[0].message.find("remote imports") != std::string::npos);
}

TEST_CASE("verification output is deterministic") {
  auto a = load_csar(testing::fixture("errors/E005"));
  auto one = verify_topology(a.topology, builtin_catalog());
  auto two = verify_topology(load_csar(testing::fixture("errors/E005")).topology, builtin_catalog());
  CHECK(one == two);
}
