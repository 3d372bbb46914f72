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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "deployqa/petri.hpp"

// Generators for property tests: random Petri nets, random topologies and
// playbook/blueprint corpora with a manifest of deliberately injected smells.
namespace dqa::testing {

using Rng = std::mt19937_64;

/// Random 1-safe-ish net with at most \p max_places places built from
/// chains, choices, joins and test arcs.
PetriNet random_net(Rng& rng, std::size_t max_places = 10);

/// Node names and dependency edges of a random topology.
struct TopologyShape {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

TopologyShape random_topology_shape(Rng& rng, std::size_t max_nodes, double edge_probability);

/// TOSCA text for a shape, every node typed tosca.nodes.Root.
std::string topology_text(const TopologyShape& shape);

struct InjectedSmell {
  std::string rule_id;
  std::string file;
  std::size_t start_byte = 0;
  std::size_t end_byte = 0;
  friend auto operator<=>(const InjectedSmell&, const InjectedSmell&) = default;
};

struct Corpus {
  std::map<std::string, std::string> files;  // relative path -> text
  std::vector<std::string> playbooks;
  std::vector<std::string> blueprints;
  std::vector<InjectedSmell> manifest;  // sorted
};

/// Clean playbooks and blueprints, then \p injections smell instances
/// spread over every built-in smell rule. Spans in the manifest are computed
/// while generating the text, independently of the parser.
Corpus generate_corpus(Rng& rng, std::size_t clean_playbooks, std::size_t clean_blueprints,
                       std::size_t injections);

}  // namespace dqa::testing
