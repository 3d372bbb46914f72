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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// A span-preserving parser for the block/flow YAML subset used by TOSCA
// blueprints, Ansible playbooks and the tool's own configuration files.
//
// Every node keeps the byte range it was parsed from, which is what lets the
// fix engine emit minimal textual edits instead of re-serializing documents.
// Supported: block mappings and sequences (including compact "- key: v"
// items and sequences indented at their parent key), flow collections,
// plain/single/double-quoted scalars with line folding, literal and folded
// block scalars with chomping and indentation indicators, comments,
// anchors/aliases and tags (tags are recorded but not interpreted).
// Not supported: complex keys ("? "), multiple documents per stream.
namespace dqa::yaml {

struct Mark {
  std::size_t byte = 0;
  std::size_t line = 1;  // 1-based
  std::size_t col = 1;   // 1-based, in bytes
};

/// Half-open byte range [start.byte, end.byte).
struct Range {
  Mark start;
  Mark end;
};

enum class NodeKind { Null, Scalar, Mapping, Sequence };
enum class ScalarStyle { Plain, SingleQuoted, DoubleQuoted, Literal, Folded };

class Node {
 public:
  NodeKind kind = NodeKind::Null;
  ScalarStyle style = ScalarStyle::Plain;
  bool flow = false;
  std::string text;  // decoded scalar value
  std::string tag;
  Range range;

  bool is_null() const;
  bool is_scalar() const { return kind == NodeKind::Scalar; }
  bool is_map() const { return kind == NodeKind::Mapping; }
  bool is_seq() const { return kind == NodeKind::Sequence; }
  bool is_plain() const { return style == ScalarStyle::Plain; }

  // Mappings store keys and values interleaved; duplicate keys are kept.
  std::size_t size() const;
  const Node& key(std::size_t i) const { return children_[2 * i]; }
  const Node& value(std::size_t i) const { return children_[2 * i + 1]; }
  const Node& item(std::size_t i) const { return children_[i]; }
  /// First mapping value whose key text equals \p name.
  const Node* find(std::string_view name) const;
  /// Index of the first entry with that key, if any.
  std::optional<std::size_t> find_index(std::string_view name) const;

  /// Typed views of plain scalars (YAML 1.2 core schema).
  std::optional<bool> as_bool() const;
  std::optional<std::int64_t> as_int() const;
  std::optional<double> as_float() const;

  void add_entry(Node key, Node value);
  void add_item(Node item);
  const std::vector<Node>& children() const { return children_; }

 private:
  std::vector<Node> children_;
};

/// Structural equality: kinds, scalar text and plain-ness, children. Ranges
/// and tags are ignored.
bool structurally_equal(const Node& a, const Node& b);

struct Comment {
  Range range;       // from '#' to end of line
  std::string text;  // without the leading '#'
};

struct Document {
  std::string file;
  Node root;
  std::vector<Comment> comments;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, Mark at, const std::string& message);
  const std::string& file() const { return file_; }
  const Mark& at() const { return at_; }
  const std::string& detail() const { return detail_; }

 private:
  std::string file_;
  Mark at_;
  std::string detail_;
};

/// Parses a single YAML document. Input must be valid UTF-8.
Document parse(std::string_view text, std::string file = {});

/// Navigates a JSON-pointer style path ("/0/tasks/2/name"). Mapping segments
/// select the first matching key; "~1" and "~0" escape '/' and '~'.
const Node* at_pointer(const Node& root, std::string_view pointer);
std::string pointer_append(std::string_view base, std::string_view segment);
std::string pointer_append(std::string_view base, std::size_t index);
/// Splits a pointer into unescaped segments.
std::vector<std::string> pointer_segments(std::string_view pointer);

/// Formats a scalar so that it re-parses to the same string: plain when
/// unambiguous, double-quoted otherwise.
std::string quote_scalar(std::string_view value);

}  // namespace dqa::yaml
