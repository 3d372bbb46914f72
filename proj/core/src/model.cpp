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
#include "deployqa/model.hpp"

#include <array>

namespace dqa {

bool is_function_ref(const PropertyValue& value) {
  static constexpr std::array<std::string_view, 9> kFunctions = {
      "get_input",     "get_property", "get_attribute",
      "get_artifact",  "get_operation_output", "concat",
      "join",          "token",        "get_secret"};
  if (!value.is_map() || value.size() != 1) return false;
  const auto& key = value.key(0);
  if (!key.is_scalar()) return false;
  for (auto f : kFunctions) {
    if (key.text == f) return true;
  }
  return false;
}

const Property* find_property(const std::vector<Property>& props, std::string_view name) {
  for (const auto& p : props) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::optional<PropertyKind> property_kind_from(std::string_view name) {
  if (name == "string") return PropertyKind::String;
  if (name == "integer") return PropertyKind::Integer;
  if (name == "float") return PropertyKind::Float;
  if (name == "boolean") return PropertyKind::Boolean;
  if (name == "list") return PropertyKind::List;
  if (name == "map") return PropertyKind::Map;
  return std::nullopt;
}

std::string_view to_string(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::String: return "string";
    case PropertyKind::Integer: return "integer";
    case PropertyKind::Float: return "float";
    case PropertyKind::Boolean: return "boolean";
    case PropertyKind::List: return "list";
    case PropertyKind::Map: return "map";
    case PropertyKind::Any: break;
  }
  return "any";
}

const NodeTemplate* resolve_node(const TopologyModel& topology, std::string_view name) {
  for (const auto& t : topology.node_templates) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

namespace {

TaskSection section_of(std::string_view segment) {
  if (segment == "pre_tasks") return TaskSection::PreTasks;
  if (segment == "post_tasks") return TaskSection::PostTasks;
  if (segment == "handlers") return TaskSection::Handlers;
  return TaskSection::Tasks;
}

void walk(const std::vector<TaskNode>& tasks, std::size_t play, TaskSection section,
          bool in_handlers, std::vector<TaskRef>& out) {
  for (const auto& t : tasks) {
    TaskSection s = section;
    if (s == TaskSection::Tasks || s == TaskSection::PreTasks || s == TaskSection::PostTasks ||
        s == TaskSection::Handlers) {
      auto segs = yaml::pointer_segments(t.pointer);
      if (segs.size() > 1) s = section_of(segs[1]);
    }
    out.push_back(TaskRef{&t, play, s, in_handlers, t.pointer});
    walk(t.children, play, TaskSection::Block, in_handlers, out);
    walk(t.rescue, play, TaskSection::Rescue, in_handlers, out);
    walk(t.always, play, TaskSection::Always, in_handlers, out);
  }
}

std::size_t count(const std::vector<TaskNode>& tasks) {
  std::size_t n = 0;
  for (const auto& t : tasks) {
    n += 1 + count(t.children) + count(t.rescue) + count(t.always);
  }
  return n;
}

}  // namespace

std::vector<TaskRef> iter_tasks(const PlaybookModel& playbook) {
  std::vector<TaskRef> out;
  for (std::size_t i = 0; i < playbook.plays.size(); ++i) {
    const auto& play = playbook.plays[i];
    walk(play.tasks, i, TaskSection::Tasks, false, out);
    walk(play.handlers, i, TaskSection::Handlers, true, out);
  }
  return out;
}

std::size_t count_task_nodes(const PlaybookModel& playbook) {
  std::size_t n = 0;
  for (const auto& play : playbook.plays) n += count(play.tasks) + count(play.handlers);
  return n;
}

}  // namespace dqa
