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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deployqa/source.hpp"
#include "deployqa/yaml.hpp"

// Intermediate representation shared by every analysis. Models are built
// once by the loader and never mutated afterwards.
namespace dqa {

/// TOSCA property values are kept as parsed YAML; intrinsic functions such
/// as get_input stay opaque.
using PropertyValue = yaml::Node;

/// True for a single-key mapping naming a TOSCA intrinsic function.
bool is_function_ref(const PropertyValue& value);

struct Property {
  std::string name;
  PropertyValue value;
  SourceSpan key_span;
  std::string pointer;  // YAML pointer of the value
};

const Property* find_property(const std::vector<Property>& props, std::string_view name);

// ---------------------------------------------------------------------------
// TOSCA

enum class PropertyKind { String, Integer, Float, Boolean, List, Map, Any };

std::optional<PropertyKind> property_kind_from(std::string_view name);
std::string_view to_string(PropertyKind kind);

struct Constraint {
  std::string text;  // rendering used in messages, e.g. "in_range: [1, 10]"
  std::optional<double> min;
  std::optional<double> max;
  bool min_exclusive = false;
  bool max_exclusive = false;
  std::vector<yaml::Node> valid_values;
  std::optional<std::string> pattern;
  std::optional<std::size_t> min_length;
  std::optional<std::size_t> max_length;
};

struct PropertySchema {
  std::string name;
  std::string type_name;  // as written
  PropertyKind kind = PropertyKind::Any;
  std::vector<Constraint> constraints;
  bool required = true;
  bool has_default = false;
  SourceSpan span;
};

struct CapabilityDef {
  std::string name;
  std::string type;
  SourceSpan span;
};

struct RequirementDef {
  std::string name;
  std::string capability;  // required capability type, may be empty
  std::string node;        // required node type, may be empty
  SourceSpan span;
};

struct TypeDef {
  std::string name;
  std::optional<std::string> derived_from;
  std::vector<PropertySchema> properties;
  std::map<std::string, CapabilityDef> capability_defs;
  std::vector<RequirementDef> requirement_defs;
  SourceSpan span;
  std::string pointer;
};

struct Requirement {
  std::string name;
  std::string target_node;      // empty if the requirement names no node
  std::string capability_name;  // capability name or type, may be empty
  SourceSpan span;
  std::string pointer;
};

struct ArtifactRef {
  enum class Kind { AnsiblePlaybook, Other };
  std::string name;
  std::string path;
  std::string type;
  Kind kind = Kind::Other;
  SourceSpan span;
};

struct NodeTemplate {
  std::string name;
  std::string type_name;
  std::vector<Property> properties;
  std::vector<Requirement> requirements;  // source order
  std::map<std::string, yaml::Node> capabilities;
  std::vector<ArtifactRef> artifacts;
  SourceSpan span;       // the template body
  SourceSpan name_span;  // the template's key
  SourceSpan type_span;
  std::string pointer;
};

struct RelationshipTemplate {
  std::string name;
  std::string type_name;
  SourceSpan span;
};

struct Import {
  std::string path;
  bool remote = false;
  SourceSpan span;
};

struct TopologyModel {
  std::string file;
  std::string definitions_version;
  std::vector<Import> imports;
  std::vector<NodeTemplate> node_templates;  // duplicates preserved
  std::vector<RelationshipTemplate> relationship_templates;
  std::map<std::string, TypeDef> node_types;
  std::map<std::string, TypeDef> capability_types;
  std::vector<Property> inputs;
  std::vector<Property> outputs;
  std::shared_ptr<const yaml::Document> document;
};

/// First template with that name in source order.
const NodeTemplate* resolve_node(const TopologyModel& topology, std::string_view name);

// ---------------------------------------------------------------------------
// Ansible

struct TaskNode {
  enum class Kind { Task, Block };

  Kind kind = Kind::Task;
  std::optional<std::string> name;
  std::optional<std::string> module;
  SourceSpan module_span;  // the module key
  std::string module_pointer;
  /// Module arguments; free-form "k=v" strings are split, leftover text is
  /// stored under "_raw_params".
  std::vector<Property> args;
  bool free_form = false;
  std::optional<std::string> when_expr;
  SourceSpan when_span;
  std::vector<std::string> notify;
  bool ignore_errors = false;
  SourceSpan ignore_errors_span;
  std::vector<Property> vars;
  std::vector<TaskNode> children;
  std::vector<TaskNode> rescue;
  std::vector<TaskNode> always;
  std::string listen;  // handlers only
  SourceSpan span;
  std::string pointer;
  const yaml::Node* syntax = nullptr;  // owned by the model's document
};

struct Play {
  std::optional<std::string> name;
  std::string hosts;
  std::vector<TaskNode> tasks;  // pre_tasks, tasks, post_tasks in order
  std::vector<TaskNode> handlers;
  std::vector<Property> vars;
  SourceSpan span;
  std::string pointer;
};

struct PlaybookModel {
  std::string file;
  std::vector<Play> plays;
  std::size_t line_count = 0;
  std::shared_ptr<const yaml::Document> document;
};

enum class TaskSection { PreTasks, Tasks, PostTasks, Handlers, Block, Rescue, Always };

struct TaskRef {
  const TaskNode* task = nullptr;
  std::size_t play = 0;
  TaskSection section = TaskSection::Tasks;  // innermost section
  bool in_handlers = false;
  std::string pointer;  // position inside the playbook document
};

/// Depth-first, source-order walk over tasks, block children, rescue and
/// always sections, then handlers, play by play.
std::vector<TaskRef> iter_tasks(const PlaybookModel& playbook);

/// Number of TaskNodes reachable from the playbook, counted recursively.
std::size_t count_task_nodes(const PlaybookModel& playbook);

}  // namespace dqa
