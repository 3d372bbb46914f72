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

#include <nlohmann/json.hpp>

#include "deployqa/yaml.hpp"

namespace dqa {

/// Converts a YAML node to JSON. Plain scalars are typed (null, booleans,
/// integers, floats); quoted and block scalars stay strings.
nlohmann::json to_json(const yaml::Node& node);

/// Emits block-style YAML that parses back to the same JSON value.
std::string emit_yaml(const nlohmann::ordered_json& value);

}  // namespace dqa
