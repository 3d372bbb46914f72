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

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "deployqa/petri.hpp"

// Reference implementations used to cross-check the library. They favour
// obviousness over speed and share no code with the code under test.
namespace dqa::oracle {

// -- graphs -----------------------------------------------------------------

using Edge = std::pair<std::string, std::string>;

/// Every elementary cycle, each rotated to start at its smallest vertex.
std::set<std::vector<std::string>> elementary_cycles(const std::vector<std::string>& vertices,
                                                     const std::vector<Edge>& edges);

/// Strongly connected components (by mutual reachability), each sorted.
std::set<std::set<std::string>> components(const std::vector<std::string>& vertices,
                                           const std::vector<Edge>& edges);

bool has_cycle(const std::vector<std::string>& vertices, const std::vector<Edge>& edges);

// -- Petri nets -------------------------------------------------------------

using PlaceSet = std::set<std::string>;

struct StateSpace {
  std::set<PlaceSet> markings;
  std::set<std::tuple<PlaceSet, std::string, PlaceSet>> edges;
  std::set<PlaceSet> deadlocks;
  std::set<std::string> dead_transitions;
  std::size_t shortest_to_first_deadlock = 0;
};

/// Depth-first enumeration working directly on the arc list.
StateSpace enumerate(const PetriNet& net);

PlaceSet place_set(const PetriNet& net, const Marking& m);

// -- least squares ----------------------------------------------------------

/// Polynomial least-squares coefficients from the normal equations solved
/// in 50-digit decimal arithmetic on the raw (unscaled) design matrix.
std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y, int degree);

/// Polynomial value in 50-digit arithmetic.
double polyval(const std::vector<double>& coefficients, double x);

}  // namespace dqa::oracle
