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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "deployqa/catalog.hpp"
#include "deployqa/finding.hpp"
#include "deployqa/model.hpp"

namespace dqa {

struct CsarArchive;

/// Set of marked places (every place holds at most one token).
class Marking {
 public:
  Marking() = default;
  explicit Marking(std::size_t places) : words_((places + 63) / 64, 0) {}

  bool test(std::size_t p) const { return (words_[p / 64] >> (p % 64)) & 1u; }
  void set(std::size_t p) { words_[p / 64] |= std::uint64_t{1} << (p % 64); }
  void reset(std::size_t p) { words_[p / 64] &= ~(std::uint64_t{1} << (p % 64)); }

  /// True iff every place marked in \p other is marked here.
  bool contains(const Marking& other) const;
  bool intersects(const Marking& other) const;
  void subtract(const Marking& other);
  void merge(const Marking& other);
  bool empty() const;
  std::vector<std::size_t> places() const;
  std::size_t hash() const;

  friend bool operator==(const Marking&, const Marking&) = default;
  friend auto operator<=>(const Marking&, const Marking&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

struct Place {
  std::string id;
  std::string label;
};

struct Transition {
  std::string id;
  std::string label;
  SourceSpan origin;    // task or node template the step comes from
  std::string subject;  // pointer of that element inside origin.file
};

enum class ArcKind { Normal, Test };

/// Arcs connect a place and a transition in either direction. Test arcs only
/// run from a place to a transition.
struct Arc {
  std::string src;
  std::string dst;
  ArcKind kind = ArcKind::Normal;
};

class InvalidNet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PetriNet {
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  Marking initial;
  std::set<std::string> terminal_places;
  /// Places that may legitimately receive a token twice (handler
  /// notifications).
  std::set<std::string> merge_places;

  std::size_t place_index(const std::string& id) const;
  std::size_t transition_index(const std::string& id) const;
  bool has_place(const std::string& id) const;
  bool has_transition(const std::string& id) const;
  /// Throws InvalidNet on duplicate ids, dangling or non-bipartite arcs.
  void validate() const;
};

/// Incremental construction helper that keeps ids unique and arcs valid.
class NetBuilder {
 public:
  std::size_t place(const std::string& id, const std::string& label = {});
  std::size_t transition(const std::string& id, const std::string& label = {}, SourceSpan origin = {},
                         std::string subject = {});
  void input(std::size_t place, std::size_t transition);
  void output(std::size_t transition, std::size_t place);
  void test(std::size_t place, std::size_t transition);
  void mark(std::size_t place);
  void terminal(std::size_t place);
  void allow_merge(std::size_t place);
  PetriNet build() const;

 private:
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> marked_;
  std::set<std::string> terminal_;
  std::set<std::string> merge_;
  std::map<std::string, std::size_t> place_ids_;
  std::map<std::string, std::size_t> transition_ids_;
};

class UnboundPlaybook : public std::runtime_error {
 public:
  explicit UnboundPlaybook(const std::string& node)
      : std::runtime_error("playbook bound to unknown node template '" + node + "'"), node_(node) {}
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

using PlaybookBinding = std::map<std::string, std::vector<const PlaybookModel*>>;

/// Lowers the deployment workflow to a net: a create/configure/start
/// lifecycle per node template, requirements as test arcs on the target's
/// started place, and bound playbooks expanded into the configure step.
PetriNet build_workflow_net(const TopologyModel& topology, const PlaybookBinding& playbooks = {});
PetriNet build_workflow_net(const CsarArchive& archive);

struct ReachabilityEdge {
  std::size_t from;
  std::size_t transition;
  std::size_t to;
  friend bool operator==(const ReachabilityEdge&, const ReachabilityEdge&) = default;
};

struct ReachabilityGraph {
  std::vector<Marking> markings;  // index 0 is the initial marking
  std::vector<ReachabilityEdge> edges;
  /// BFS tree: the edge that first discovered each marking (none for 0).
  std::vector<std::ptrdiff_t> parent_edge;
  bool complete = true;
  std::size_t visited = 0;
  std::size_t max_markings = 0;
  /// Places that received a token while already marked, outside the net's
  /// merge_places.
  std::set<std::size_t> unexpected_merges;
};

constexpr std::size_t kDefaultMaxMarkings = 1'000'000;

/// Breadth-first exploration with transitions tried in index order. Stops
/// and flags the graph incomplete once max_markings markings are known.
ReachabilityGraph reachability_graph(const PetriNet& net,
                                     std::size_t max_markings = kDefaultMaxMarkings);

class IncompleteGraph : public std::runtime_error {
 public:
  explicit IncompleteGraph(std::size_t limit)
      : std::runtime_error("state space exceeds " + std::to_string(limit) + " markings"),
        limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

std::vector<std::size_t> enabled_transitions(const PetriNet& net, const Marking& m);

/// Firing sequence (transition indices) leading to marking \p index.
std::vector<std::size_t> witness_path(const ReachabilityGraph& graph, std::size_t index);

/// Indices of reachable markings that enable nothing and lack a terminal
/// place.
std::vector<std::size_t> dead_markings(const ReachabilityGraph& graph, const PetriNet& net);

/// W101 findings, one per dead marking.
std::vector<Finding> detect_deadlocks(const ReachabilityGraph& graph, const PetriNet& net,
                                      const Catalog& catalog);

/// W102 findings, one per transition that labels no edge.
std::vector<Finding> dead_transitions(const ReachabilityGraph& graph, const PetriNet& net,
                                      const Catalog& catalog);

enum class NetFormat { Dot, Pnml };

std::string export_net(const PetriNet& net, NetFormat format);

}  // namespace dqa
