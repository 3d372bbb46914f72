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

#include <string>
#include <vector>

#include "deployqa/catalog.hpp"
#include "deployqa/finding.hpp"
#include "deployqa/model.hpp"

namespace dqa {

struct DependencyEdge {
  std::string source;
  std::string target;
  std::string requirement;
  friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
};

/// Requirement relation between node templates. Vertices are template names
/// in first-occurrence order; edges follow source order.
struct DependencyGraph {
  std::vector<std::string> vertices;
  std::vector<DependencyEdge> edges;
};

DependencyGraph dependency_graph(const TopologyModel& topology);

/// One witness cycle per strongly connected component with more than one
/// vertex, plus every self-loop. Each cycle starts at its smallest vertex;
/// the list is sorted.
std::vector<std::vector<std::string>> detect_cycles(const DependencyGraph& graph);

/// Structural checks E001-E007 (and E003a), sorted and deduplicated.
std::vector<Finding> verify_topology(const TopologyModel& topology, const Catalog& catalog);

/// The normative TOSCA types every blueprint may use without importing them.
const TopologyModel& normative_types();

}  // namespace dqa
