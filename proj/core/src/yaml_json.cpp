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
#include "deployqa/yaml_json.hpp"

#include <cmath>
#include <sstream>

namespace dqa {

nlohmann::json to_json(const yaml::Node& node) {
  switch (node.kind) {
    case yaml::NodeKind::Null:
      return nullptr;
    case yaml::NodeKind::Scalar:
      if (node.is_null()) return nullptr;
      if (auto b = node.as_bool()) return *b;
      if (auto i = node.as_int()) return *i;
      if (auto f = node.as_float(); f && std::isfinite(*f)) return *f;
      return node.text;
    case yaml::NodeKind::Sequence: {
      auto arr = nlohmann::json::array();
      for (std::size_t i = 0; i < node.size(); ++i) arr.push_back(to_json(node.item(i)));
      return arr;
    }
    case yaml::NodeKind::Mapping: {
      auto obj = nlohmann::json::object();
      for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string& k = node.key(i).text;
        if (!obj.contains(k)) obj[k] = to_json(node.value(i));
      }
      return obj;
    }
  }
  return nullptr;
}

namespace {

std::string scalar_text(const nlohmann::ordered_json& v) {
  if (v.is_string()) return yaml::quote_scalar(v.get<std::string>());
  if (v.is_null()) return "null";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_object()) return "{}";
  if (v.is_array()) return "[]";
  return v.dump();
}

bool is_inline(const nlohmann::ordered_json& v) {
  return !(v.is_object() || v.is_array()) || v.empty();
}

void emit(const nlohmann::ordered_json& v, int indent, std::ostringstream& out);

void emit_object_body(const nlohmann::ordered_json& v, int indent, bool first_inline,
                      std::ostringstream& out) {
  bool first = true;
  for (auto it = v.begin(); it != v.end(); ++it) {
    if (!(first && first_inline)) out << std::string(static_cast<std::size_t>(indent), ' ');
    first = false;
    out << yaml::quote_scalar(it.key()) << ":";
    if (is_inline(it.value())) {
      out << " " << scalar_text(it.value()) << "\n";
    } else {
      out << "\n";
      emit(it.value(), indent + 2, out);
    }
  }
}

void emit(const nlohmann::ordered_json& v, int indent, std::ostringstream& out) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  if (v.is_object() && !v.empty()) {
    emit_object_body(v, indent, false, out);
  } else if (v.is_array() && !v.empty()) {
    for (const auto& item : v) {
      out << pad << "-";
      if (is_inline(item)) {
        out << " " << scalar_text(item) << "\n";
      } else if (item.is_object()) {
        out << " ";
        emit_object_body(item, indent + 2, true, out);
      } else {
        out << "\n";
        emit(item, indent + 2, out);
      }
    }
  } else {
    out << pad << scalar_text(v) << "\n";
  }
}

}  // namespace

std::string emit_yaml(const nlohmann::ordered_json& value) {
  std::ostringstream out;
  emit(value, 0, out);
  return out.str();
}

}  // namespace dqa
