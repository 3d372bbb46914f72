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

#include "deployqa/yaml.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <regex>

namespace dqa::yaml {

bool Node::is_null() const {
  if (kind == NodeKind::Null) return true;
  if (kind != NodeKind::Scalar || style != ScalarStyle::Plain) return false;
  return text.empty() || text == "~" || text == "null" || text == "Null" ||
         text == "NULL";
}

std::size_t Node::size() const {
  return kind == NodeKind::Mapping ? children_.size() / 2 : children_.size();
}

const Node* Node::find(std::string_view name) const {
  auto idx = find_index(name);
  return idx ? &value(*idx) : nullptr;
}

std::optional<std::size_t> Node::find_index(std::string_view name) const {
  if (kind != NodeKind::Mapping) return std::nullopt;
  for (std::size_t i = 0; i < size(); ++i) {
    if (key(i).is_scalar() && key(i).text == name) return i;
  }
  return std::nullopt;
}

std::optional<bool> Node::as_bool() const {
  if (kind != NodeKind::Scalar || style != ScalarStyle::Plain) return std::nullopt;
  if (text == "true" || text == "True" || text == "TRUE") return true;
  if (text == "false" || text == "False" || text == "FALSE") return false;
  return std::nullopt;
}

std::optional<std::int64_t> Node::as_int() const {
  if (kind != NodeKind::Scalar || style != ScalarStyle::Plain) return std::nullopt;
  static const std::regex dec("[-+]?[0-9]+");
  static const std::regex hex("0x[0-9a-fA-F]+");
  static const std::regex oct("0o[0-7]+");
  std::int64_t v = 0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  if (std::regex_match(text, dec)) {
    if (*b == '+') ++b;
    auto r = std::from_chars(b, e, v, 10);
    if (r.ec == std::errc() && r.ptr == e) return v;
  } else if (std::regex_match(text, hex)) {
    auto r = std::from_chars(b + 2, e, v, 16);
    if (r.ec == std::errc() && r.ptr == e) return v;
  } else if (std::regex_match(text, oct)) {
    auto r = std::from_chars(b + 2, e, v, 8);
    if (r.ec == std::errc() && r.ptr == e) return v;
  }
  return std::nullopt;
}

std::optional<double> Node::as_float() const {
  if (kind != NodeKind::Scalar || style != ScalarStyle::Plain) return std::nullopt;
  if (auto i = as_int()) return static_cast<double>(*i);
  static const std::regex num(
      R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
  if (std::regex_match(text, num)) {
    try {
      return std::stod(text);
    } catch (const std::out_of_range&) {
      return std::nullopt;
    }
  }
  if (text == ".inf" || text == ".Inf" || text == ".INF" || text == "+.inf")
    return HUGE_VAL;
  if (text == "-.inf" || text == "-.Inf" || text == "-.INF") return -HUGE_VAL;
  if (text == ".nan" || text == ".NaN" || text == ".NAN") return std::nan("");
  return std::nullopt;
}

void Node::add_entry(Node key, Node value) {
  children_.push_back(std::move(key));
  children_.push_back(std::move(value));
}

void Node::add_item(Node item) { children_.push_back(std::move(item)); }

bool structurally_equal(const Node& a, const Node& b) {
  if (a.is_null() && b.is_null()) return true;
  if (a.kind != b.kind) return false;
  if (a.kind == NodeKind::Scalar) {
    return a.text == b.text && a.is_plain() == b.is_plain();
  }
  const auto& ca = a.children();
  const auto& cb = b.children();
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (!structurally_equal(ca[i], cb[i])) return false;
  }
  return true;
}

ParseError::ParseError(std::string file, Mark at, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(at.line) + ":" +
                         std::to_string(at.col) + ": " + message),
      file_(std::move(file)),
      at_(at),
      detail_(message) {}

namespace {

bool valid_utf8(std::string_view s, std::size_t& bad) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t n = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      n = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
      cp = c & 0x07;
    } else {
      bad = i;
      return false;
    }
    for (std::size_t k = 1; k <= n; ++k) {
      if (i + k >= s.size()) {
        bad = i;
        return false;
      }
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        bad = i;
        return false;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) ||
        (n == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      bad = i;
      return false;
    }
    i += n + 1;
  }
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_flow_indicator(char c) {
  return c == ',' || c == '[' || c == ']' || c == '{' || c == '}';
}

class Parser {
 public:
  Parser(std::string_view text, std::string file)
      : s_(text), file_(std::move(file)) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < s_.size(); ++i) {
      if (s_[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  Document run() {
    std::size_t bad = 0;
    if (!valid_utf8(s_, bad)) fail(bad, "input is not valid UTF-8");
    if (s_.substr(0, 3) == "\xEF\xBB\xBF") p_ = 3;

    skip_to_content();
    while (!eof() && col_of(p_) == 0 && peek() == '%') {
      skip_line();
      skip_to_content();
    }
    bool explicit_start = false;
    if (doc_marker("---")) {
      p_ += 3;
      explicit_start = true;
    }
    Node root = parse_block_node(-1, false, p_);
    skip_to_content();
    if (doc_marker("...")) {
      p_ += 3;
      skip_to_content();
    }
    if (!eof()) {
      if (doc_marker("---")) fail(p_, "multiple documents are not supported");
      fail(p_, "unexpected content after document root");
    }
    (void)explicit_start;
    Document doc;
    doc.file = file_;
    doc.root = std::move(root);
    doc.comments = std::move(comments_);
    return doc;
  }

 private:
  std::string_view s_;
  std::string file_;
  std::size_t p_ = 0;
  std::vector<std::size_t> line_starts_;
  std::vector<Comment> comments_;
  std::map<std::string, Node, std::less<>> anchors_;

  Mark mark(std::size_t byte) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), byte);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return Mark{byte, line, byte - line_starts_[line - 1] + 1};
  }

  Range range(std::size_t b, std::size_t e) const { return {mark(b), mark(e)}; }

  [[noreturn]] void fail(std::size_t at, const std::string& msg) const {
    throw ParseError(file_, mark(std::min(at, s_.size())), msg);
  }

  bool eof() const { return p_ >= s_.size(); }
  char peek(std::size_t off = 0) const {
    return p_ + off < s_.size() ? s_[p_ + off] : '\0';
  }
  char at(std::size_t pos) const { return pos < s_.size() ? s_[pos] : '\0'; }

  std::size_t col_of(std::size_t pos) const { return mark(pos).col - 1; }

  static bool is_ws(char c) { return c == ' ' || c == '\t'; }
  bool is_break_at(std::size_t pos) const {
    char c = at(pos);
    return c == '\n' || (c == '\r' && at(pos + 1) == '\n') || pos >= s_.size();
  }
  bool ws_or_end_at(std::size_t pos) const {
    return pos >= s_.size() || is_ws(at(pos)) || is_break_at(pos);
  }

  bool doc_marker(std::string_view m) const {
    return !eof() && col_of(p_) == 0 && s_.substr(p_, 3) == m &&
           ws_or_end_at(p_ + 3);
  }

  bool at_seq_dash() const { return peek() == '-' && ws_or_end_at(p_ + 1); }

  void skip_line() {
    while (!eof() && peek() != '\n') ++p_;
    if (!eof()) ++p_;
  }

  void skip_spaces() {
    while (!eof() && is_ws(peek())) ++p_;
  }

  void read_comment() {
    std::size_t b = p_;
    while (!eof() && peek() != '\n' && !(peek() == '\r' && peek(1) == '\n')) ++p_;
    Comment c;
    c.range = range(b, p_);
    c.text = std::string(s_.substr(b + 1, p_ - b - 1));
    if (comments_.empty() || comments_.back().range.start.byte < b) {
      comments_.push_back(std::move(c));
    }
  }

  // Skips whitespace, comments and line breaks up to the next content byte.
  void skip_to_content() {
    bool line_start = p_ == 0 || at(p_ - 1) == '\n';
    while (!eof()) {
      char c = peek();
      if (c == ' ') {
        ++p_;
      } else if (c == '\t') {
        if (line_start) {
          std::size_t q = p_;
          while (q < s_.size() && is_ws(at(q))) ++q;
          if (!is_break_at(q) && at(q) != '#') {
            fail(p_, "tab characters are not allowed in indentation");
          }
        }
        ++p_;
      } else if (c == '\r' && peek(1) == '\n') {
        p_ += 2;
        line_start = true;
      } else if (c == '\n') {
        ++p_;
        line_start = true;
      } else if (c == '#') {
        if (p_ > 0 && !is_ws(at(p_ - 1)) && at(p_ - 1) != '\n') {
          return;
        }
        read_comment();
      } else {
        return;
      }
    }
  }

  // Consumes trailing spaces and an optional comment; requires a line end.
  void expect_line_end(const char* what) {
    skip_spaces();
    if (peek() == '#') read_comment();
    if (!is_break_at(p_)) fail(p_, std::string("unexpected content after ") + what);
  }

  Node null_at(std::size_t pos) const {
    Node n;
    n.kind = NodeKind::Null;
    n.range = range(pos, pos);
    return n;
  }

  Node parse_block_node(int parent_indent, bool seq_at_parent_ok,
                        std::size_t empty_at) {
    skip_to_content();
    if (eof() || doc_marker("---") || doc_marker("...")) return null_at(empty_at);
    int col = static_cast<int>(col_of(p_));
    if (col <= parent_indent) {
      if (!(seq_at_parent_ok && col == parent_indent && at_seq_dash())) {
        return null_at(empty_at);
      }
    }
    return parse_node_here(parent_indent, col);
  }

  // Reads "&anchor" and "!tag" prefixes. Returns true if any were present.
  bool read_properties(std::string& anchor, std::string& tag) {
    bool any = false;
    while (peek() == '&' || peek() == '!') {
      any = true;
      bool is_anchor = peek() == '&';
      std::size_t b = ++p_;
      while (!eof() && !is_ws(peek()) && !is_break_at(p_) &&
             !(is_anchor && is_flow_indicator(peek())))
        ++p_;
      if (is_anchor) {
        anchor = std::string(s_.substr(b, p_ - b));
        if (anchor.empty()) fail(b, "empty anchor name");
      } else {
        tag = "!" + std::string(s_.substr(b, p_ - b));
      }
      skip_spaces();
    }
    return any;
  }

  Node parse_alias() {
    std::size_t b = p_++;
    while (!eof() && !is_ws(peek()) && !is_break_at(p_) && !is_flow_indicator(peek()))
      ++p_;
    std::string name(s_.substr(b + 1, p_ - b - 1));
    auto it = anchors_.find(name);
    if (it == anchors_.end()) fail(b, "unknown alias '" + name + "'");
    Node n = it->second;
    n.range = range(b, p_);
    return n;
  }

  void remember(const std::string& anchor, const Node& n) {
    if (!anchor.empty()) anchors_[anchor] = n;
  }

  Node parse_node_here(int parent_indent, int col) {
    std::string anchor, tag;
    std::size_t prop_start = p_;
    if (read_properties(anchor, tag)) {
      if (peek() == '#' || is_break_at(p_)) {
        if (peek() == '#') read_comment();
        Node n = parse_block_node(parent_indent, true, p_);
        n.tag = tag;
        remember(anchor, n);
        return n;
      }
      col = static_cast<int>(col_of(p_));
    }
    (void)prop_start;
    Node n = parse_node_content(parent_indent, col);
    if (!tag.empty()) n.tag = tag;
    remember(anchor, n);
    return n;
  }

  Node parse_node_content(int parent_indent, int col) {
    if (peek() == '*') {
      Node n = parse_alias();
      skip_spaces();
      if (peek() == ':' && ws_or_end_at(p_ + 1)) {
        return parse_block_mapping(col, std::move(n));
      }
      return n;
    }
    if (at_seq_dash()) return parse_block_sequence(col);
    if (peek() == '|' || peek() == '>') return parse_block_scalar(parent_indent);
    if (peek() == '[' || peek() == '{') {
      Node n = parse_flow();
      skip_spaces();
      if (peek() == ':' && ws_or_end_at(p_ + 1)) {
        fail(p_, "flow collections as mapping keys are not supported");
      }
      expect_line_end("flow collection");
      return n;
    }
    if (peek() == '?' && ws_or_end_at(p_ + 1)) {
      fail(p_, "complex mapping keys are not supported");
    }
    std::size_t start = p_;
    Node scalar = parse_scalar_first_line(false);
    skip_spaces();
    if (peek() == ':' && ws_or_end_at(p_ + 1)) {
      return parse_block_mapping(col, std::move(scalar));
    }
    if (scalar.style == ScalarStyle::Plain) {
      continue_plain(scalar, start, parent_indent);
    }
    expect_line_end("scalar");
    return scalar;
  }

  // Mapping with entries at column `indent`; p_ sits on the ':' after the
  // first key.
  Node parse_block_mapping(int indent, Node first_key) {
    Node map;
    map.kind = NodeKind::Mapping;
    std::size_t start = first_key.range.start.byte;
    std::size_t end = first_key.range.end.byte;
    Node key = std::move(first_key);
    while (true) {
      if (!(peek() == ':' && ws_or_end_at(p_ + 1))) {
        fail(p_, "expected ':' after mapping key");
      }
      std::size_t colon = p_++;
      Node value = parse_mapping_value(indent, colon);
      end = std::max(key.range.end.byte, value.range.end.byte);
      if (value.kind == NodeKind::Null && value.range.start.byte == colon + 1) {
        end = std::max(end, colon + 1);
      }
      map.add_entry(std::move(key), std::move(value));

      skip_to_content();
      if (eof() || doc_marker("---") || doc_marker("...")) break;
      int c = static_cast<int>(col_of(p_));
      if (c < indent) break;
      if (c > indent) fail(p_, "bad indentation of a mapping entry");
      if (at_seq_dash()) break;
      key = parse_key();
      skip_spaces();
    }
    map.range = range(start, end);
    return map;
  }

  Node parse_key() {
    if (peek() == '?' && ws_or_end_at(p_ + 1)) {
      fail(p_, "complex mapping keys are not supported");
    }
    if (peek() == '[' || peek() == '{') {
      fail(p_, "flow collections as mapping keys are not supported");
    }
    if (peek() == '*') return parse_alias();
    std::size_t b = p_;
    Node k = parse_scalar_first_line(false);
    skip_spaces();
    if (!(peek() == ':' && ws_or_end_at(p_ + 1))) {
      fail(b, "expected a mapping key");
    }
    return k;
  }

  Node parse_mapping_value(int indent, std::size_t colon) {
    skip_spaces();
    if (peek() == '#' || is_break_at(p_)) {
      if (peek() == '#') read_comment();
      return parse_block_node(indent, true, colon + 1);
    }
    std::string anchor, tag;
    if (read_properties(anchor, tag)) {
      if (peek() == '#' || is_break_at(p_)) {
        if (peek() == '#') read_comment();
        Node n = parse_block_node(indent, true, p_);
        n.tag = tag;
        remember(anchor, n);
        return n;
      }
    }
    Node n;
    if (peek() == '*') {
      n = parse_alias();
      expect_line_end("alias");
    } else if (peek() == '|' || peek() == '>') {
      n = parse_block_scalar(indent);
    } else if (peek() == '[' || peek() == '{') {
      n = parse_flow();
      expect_line_end("flow collection");
    } else if (at_seq_dash()) {
      fail(p_, "block sequence entries are not allowed on the same line as a key");
    } else {
      std::size_t start = p_;
      n = parse_scalar_first_line(false);
      skip_spaces();
      if (peek() == ':' && ws_or_end_at(p_ + 1)) {
        fail(p_, "mapping values are not allowed here");
      }
      if (n.style == ScalarStyle::Plain) continue_plain(n, start, indent);
      expect_line_end("scalar");
    }
    if (!tag.empty()) n.tag = tag;
    remember(anchor, n);
    return n;
  }

  Node parse_block_sequence(int indent) {
    Node seq;
    seq.kind = NodeKind::Sequence;
    std::size_t start = p_;
    std::size_t end = p_;
    while (true) {
      std::size_t dash = p_++;
      skip_spaces();
      Node item;
      if (peek() == '#' || is_break_at(p_)) {
        if (peek() == '#') read_comment();
        item = parse_block_node(indent, false, dash + 1);
      } else {
        item = parse_node_here(indent, static_cast<int>(col_of(p_)));
      }
      end = std::max(dash + 1, item.range.end.byte);
      seq.add_item(std::move(item));

      skip_to_content();
      if (eof() || doc_marker("---") || doc_marker("...")) break;
      int c = static_cast<int>(col_of(p_));
      if (c == indent && at_seq_dash()) continue;
      if (c <= indent) break;
      fail(p_, "bad indentation of a sequence entry");
    }
    seq.range = range(start, end);
    return seq;
  }

  // A quoted scalar (possibly multi-line) or the first line of a plain one.
  Node parse_scalar_first_line(bool in_flow) {
    if (peek() == '\'') return parse_single_quoted();
    if (peek() == '"') return parse_double_quoted();
    std::size_t b = p_;
    char c = peek();
    if (c == '#' || c == '%' || c == '@' || c == '`' || c == '|' || c == '>' ||
        (!in_flow && (c == ']' || c == '}' || c == ','))) {
      fail(p_, std::string("unexpected character '") + c + "'");
    }
    std::size_t last = p_;  // end of last non-space byte
    while (!eof() && !is_break_at(p_)) {
      char ch = peek();
      if (ch == ':' && (ws_or_end_at(p_ + 1) ||
                        (in_flow && is_flow_indicator(at(p_ + 1))))) {
        break;
      }
      if (ch == '#' && p_ > b && is_ws(at(p_ - 1))) break;
      if (in_flow && is_flow_indicator(ch)) break;
      ++p_;
      if (!is_ws(ch)) last = p_;
    }
    Node n;
    n.kind = NodeKind::Scalar;
    n.style = ScalarStyle::Plain;
    n.text = std::string(s_.substr(b, last - b));
    n.range = range(b, last);
    p_ = last;
    return n;
  }

  // Appends continuation lines of a multi-line plain scalar.
  void continue_plain(Node& n, std::size_t start, int owner_indent) {
    while (true) {
      std::size_t save = p_;
      skip_spaces();
      if (!is_break_at(p_) || eof()) {
        p_ = save;
        return;
      }
      std::size_t q = p_;
      int breaks = 0;
      std::size_t line_begin = q;
      while (q < s_.size()) {
        if (at(q) == '\r' && at(q + 1) == '\n') {
          q += 2;
        } else if (at(q) == '\n') {
          ++q;
        } else {
          break;
        }
        ++breaks;
        line_begin = q;
        while (q < s_.size() && is_ws(at(q))) ++q;
        if (!is_break_at(q)) break;
      }
      if (q >= s_.size() || at(q) == '#') {
        p_ = save;
        return;
      }
      int c = static_cast<int>(q - line_begin);
      if (c <= owner_indent) {
        p_ = save;
        return;
      }
      if (c == 0 && (s_.substr(q, 3) == "---" || s_.substr(q, 3) == "...") &&
          ws_or_end_at(q + 3)) {
        p_ = save;
        return;
      }
      p_ = q;
      std::size_t lb = p_;
      std::size_t last = p_;
      while (!eof() && !is_break_at(p_)) {
        char ch = peek();
        if (ch == ':' && ws_or_end_at(p_ + 1)) {
          fail(p_, "mapping values are not allowed here");
        }
        if (ch == '#' && is_ws(at(p_ - 1))) break;
        ++p_;
        if (!is_ws(ch)) last = p_;
      }
      if (breaks == 1) {
        n.text += ' ';
      } else {
        n.text.append(static_cast<std::size_t>(breaks - 1), '\n');
      }
      n.text += std::string(s_.substr(lb, last - lb));
      n.range = range(start, last);
      p_ = last;
    }
  }

  // Folds a line break inside a quoted scalar. p_ is on the break.
  void fold_quoted_break(std::string& out) {
    while (!out.empty() && (out.back() == ' ' || out.back() == '\t')) out.pop_back();
    int breaks = 0;
    while (true) {
      if (peek() == '\r' && peek(1) == '\n') {
        p_ += 2;
      } else if (peek() == '\n') {
        ++p_;
      } else {
        break;
      }
      ++breaks;
      skip_spaces();
    }
    if (breaks == 1) {
      out += ' ';
    } else {
      out.append(static_cast<std::size_t>(breaks - 1), '\n');
    }
  }

  Node parse_single_quoted() {
    std::size_t b = p_++;
    std::string out;
    while (true) {
      if (eof()) fail(b, "unterminated single-quoted scalar");
      char c = peek();
      if (c == '\'') {
        if (peek(1) == '\'') {
          out += '\'';
          p_ += 2;
          continue;
        }
        ++p_;
        break;
      }
      if (c == '\n' || (c == '\r' && peek(1) == '\n')) {
        fold_quoted_break(out);
        continue;
      }
      out += c;
      ++p_;
    }
    Node n;
    n.kind = NodeKind::Scalar;
    n.style = ScalarStyle::SingleQuoted;
    n.text = std::move(out);
    n.range = range(b, p_);
    return n;
  }

  std::uint32_t read_hex(std::size_t digits) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = peek();
      int d;
      if (c >= '0' && c <= '9') {
        d = c - '0';
      } else if (c >= 'a' && c <= 'f') {
        d = c - 'a' + 10;
      } else if (c >= 'A' && c <= 'F') {
        d = c - 'A' + 10;
      } else {
        fail(p_, "invalid hexadecimal escape");
      }
      v = v * 16 + static_cast<std::uint32_t>(d);
      ++p_;
    }
    return v;
  }

  Node parse_double_quoted() {
    std::size_t b = p_++;
    std::string out;
    while (true) {
      if (eof()) fail(b, "unterminated double-quoted scalar");
      char c = peek();
      if (c == '"') {
        ++p_;
        break;
      }
      if (c == '\\') {
        ++p_;
        char e = peek();
        ++p_;
        switch (e) {
          case '0': out += '\0'; break;
          case 'a': out += '\a'; break;
          case 'b': out += '\b'; break;
          case 't': case '\t': out += '\t'; break;
          case 'n': out += '\n'; break;
          case 'v': out += '\v'; break;
          case 'f': out += '\f'; break;
          case 'r': out += '\r'; break;
          case 'e': out += '\x1b'; break;
          case ' ': out += ' '; break;
          case '"': out += '"'; break;
          case '/': out += '/'; break;
          case '\\': out += '\\'; break;
          case 'N': append_utf8(out, 0x85); break;
          case '_': append_utf8(out, 0xA0); break;
          case 'L': append_utf8(out, 0x2028); break;
          case 'P': append_utf8(out, 0x2029); break;
          case 'x': append_utf8(out, read_hex(2)); break;
          case 'u': append_utf8(out, read_hex(4)); break;
          case 'U': append_utf8(out, read_hex(8)); break;
          case '\r':
          case '\n':
            if (e == '\r' && peek() == '\n') ++p_;
            skip_spaces();
            break;
          default:
            fail(p_ - 2, std::string("unknown escape sequence '\\") + e + "'");
        }
        continue;
      }
      if (c == '\n' || (c == '\r' && peek(1) == '\n')) {
        fold_quoted_break(out);
        continue;
      }
      out += c;
      ++p_;
    }
    Node n;
    n.kind = NodeKind::Scalar;
    n.style = ScalarStyle::DoubleQuoted;
    n.text = std::move(out);
    n.range = range(b, p_);
    return n;
  }

  Node parse_block_scalar(int parent_indent) {
    std::size_t b = p_;
    bool literal = peek() == '|';
    ++p_;
    char chomp = 'c';
    int explicit_indent = 0;
    for (int i = 0; i < 2; ++i) {
      char c = peek();
      if ((c == '-' || c == '+') && chomp == 'c') {
        chomp = c;
        ++p_;
      } else if (c >= '1' && c <= '9' && explicit_indent == 0) {
        explicit_indent = c - '0';
        ++p_;
      }
    }
    std::size_t header_end = p_;
    skip_spaces();
    if (peek() == '#') read_comment();
    if (!is_break_at(p_)) fail(p_, "unexpected content after block scalar header");
    if (!eof()) p_ += (peek() == '\r') ? 2 : 1;

    int base = parent_indent < 0 ? 0 : parent_indent;
    int content_indent = explicit_indent ? base + explicit_indent : -1;

    // Collect lines.
    std::vector<std::string_view> lines;
    std::size_t content_end = header_end;
    std::size_t after = p_;
    std::size_t q = p_;
    while (q < s_.size()) {
      std::size_t ls = q;
      std::size_t le = q;
      while (le < s_.size() && s_[le] != '\n') ++le;
      std::size_t text_end = le;
      if (text_end > ls && s_[text_end - 1] == '\r') --text_end;
      std::size_t spaces = 0;
      while (ls + spaces < text_end && s_[ls + spaces] == ' ') ++spaces;
      bool blank = ls + spaces == text_end;
      if (content_indent < 0 && !blank) {
        if (static_cast<int>(spaces) <= parent_indent) break;
        content_indent = static_cast<int>(spaces);
      }
      if (!blank && static_cast<int>(spaces) < content_indent) break;
      if (!blank && content_indent >= 0 && static_cast<int>(spaces) >= content_indent) {
        if (spaces == 0 && (s_.substr(ls, 3) == "---" || s_.substr(ls, 3) == "...") &&
            (ls + 3 >= text_end || is_ws(s_[ls + 3]))) {
          break;
        }
        lines.push_back(s_.substr(ls + static_cast<std::size_t>(content_indent),
                                  text_end - ls - static_cast<std::size_t>(content_indent)));
        content_end = text_end;
      } else {
        // Blank line; keep content beyond the indentation.
        std::size_t skip = content_indent >= 0
                               ? std::min<std::size_t>(static_cast<std::size_t>(content_indent),
                                                       text_end - ls)
                               : text_end - ls;
        lines.push_back(s_.substr(ls + skip, text_end - ls - skip));
      }
      q = le < s_.size() ? le + 1 : le;
      after = q;
      if (le >= s_.size()) break;
    }
    // Lines past the last content line belong to the scalar only as trailing
    // breaks; the parser resumes after them.
    std::size_t trailing_blank = 0;
    while (!lines.empty() && trailing_blank < lines.size() &&
           lines[lines.size() - 1 - trailing_blank].find_first_not_of(' ') ==
               std::string_view::npos) {
      ++trailing_blank;
    }
    std::size_t body = lines.size() - trailing_blank;
    std::string out;
    if (literal) {
      for (std::size_t i = 0; i < body; ++i) {
        out += lines[i];
        if (i + 1 < body) out += '\n';
      }
    } else {
      bool prev_normal = false;
      bool pending_blank = false;
      for (std::size_t i = 0; i < body; ++i) {
        std::string_view l = lines[i];
        bool blank = l.find_first_not_of(' ') == std::string_view::npos;
        bool more = !blank && (l[0] == ' ' || l[0] == '\t');
        if (blank) {
          out += '\n';
          pending_blank = true;
          continue;
        }
        if (i > 0) {
          if (prev_normal && !more && !pending_blank) {
            out += ' ';
          } else if (!pending_blank || more) {
            out += '\n';
          }
        }
        out += l;
        prev_normal = !more;
        pending_blank = false;
      }
    }
    if (body > 0) {
      if (chomp == 'c') {
        out += '\n';
      } else if (chomp == '+') {
        out += '\n';
        out.append(trailing_blank, '\n');
      }
    } else if (chomp == '+') {
      out.append(trailing_blank, '\n');
    }
    p_ = after;
    Node n;
    n.kind = NodeKind::Scalar;
    n.style = literal ? ScalarStyle::Literal : ScalarStyle::Folded;
    n.text = std::move(out);
    n.range = range(b, body > 0 ? content_end : header_end);
    return n;
  }

  void skip_flow_ws() {
    while (!eof()) {
      char c = peek();
      if (is_ws(c) || c == '\n' || c == '\r') {
        ++p_;
      } else if (c == '#' && (p_ == 0 || is_ws(at(p_ - 1)) || at(p_ - 1) == '\n')) {
        read_comment();
      } else {
        return;
      }
    }
  }

  Node parse_flow_node() {
    skip_flow_ws();
    std::string anchor, tag;
    if (read_properties(anchor, tag)) skip_flow_ws();
    Node n;
    if (eof()) fail(p_, "unexpected end of input in flow collection");
    char c = peek();
    if (c == '[' || c == '{') {
      n = parse_flow();
    } else if (c == '*') {
      n = parse_alias();
    } else if (c == ',' || c == ']' || c == '}') {
      n = null_at(p_);
    } else {
      n = parse_scalar_first_line(true);
    }
    if (!tag.empty()) n.tag = tag;
    remember(anchor, n);
    return n;
  }

  bool at_flow_colon() const {
    return peek() == ':' && (ws_or_end_at(p_ + 1) || is_flow_indicator(at(p_ + 1)));
  }

  Node parse_flow() {
    std::size_t b = p_;
    bool is_seq = peek() == '[';
    char close = is_seq ? ']' : '}';
    ++p_;
    Node n;
    n.kind = is_seq ? NodeKind::Sequence : NodeKind::Mapping;
    n.flow = true;
    while (true) {
      skip_flow_ws();
      if (eof()) fail(b, "unterminated flow collection");
      if (peek() == close) {
        ++p_;
        break;
      }
      if (is_seq) {
        Node item = parse_flow_node();
        skip_flow_ws();
        if (at_flow_colon()) {
          ++p_;
          Node value = parse_flow_node();
          Node pair;
          pair.kind = NodeKind::Mapping;
          pair.flow = true;
          pair.range = range(item.range.start.byte,
                             std::max(item.range.end.byte, value.range.end.byte));
          pair.add_entry(std::move(item), std::move(value));
          item = std::move(pair);
          skip_flow_ws();
        }
        n.add_item(std::move(item));
      } else {
        Node key = parse_flow_node();
        skip_flow_ws();
        Node value;
        if (at_flow_colon()) {
          ++p_;
          skip_flow_ws();
          if (peek() == ',' || peek() == '}') {
            value = null_at(p_);
          } else {
            value = parse_flow_node();
          }
          skip_flow_ws();
        } else {
          value = null_at(key.range.end.byte);
        }
        n.add_entry(std::move(key), std::move(value));
      }
      if (peek() == ',') {
        ++p_;
        continue;
      }
      if (peek() == close) {
        ++p_;
        break;
      }
      fail(p_, std::string("expected ',' or '") + close + "' in flow collection");
    }
    n.range = range(b, p_);
    return n;
  }
};

std::string unescape_segment(std::string_view seg) {
  std::string out;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    if (seg[i] == '~' && i + 1 < seg.size() && (seg[i + 1] == '0' || seg[i + 1] == '1')) {
      out += seg[i + 1] == '0' ? '~' : '/';
      ++i;
    } else {
      out += seg[i];
    }
  }
  return out;
}

}  // namespace

Document parse(std::string_view text, std::string file) {
  Parser p(text, std::move(file));
  return p.run();
}

std::vector<std::string> pointer_segments(std::string_view pointer) {
  std::vector<std::string> out;
  if (pointer.empty()) return out;
  std::size_t i = pointer[0] == '/' ? 1 : 0;
  while (i <= pointer.size()) {
    std::size_t j = pointer.find('/', i);
    if (j == std::string_view::npos) j = pointer.size();
    out.push_back(unescape_segment(pointer.substr(i, j - i)));
    i = j + 1;
  }
  return out;
}

const Node* at_pointer(const Node& root, std::string_view pointer) {
  const Node* cur = &root;
  for (const auto& seg : pointer_segments(pointer)) {
    if (cur->is_map()) {
      cur = cur->find(seg);
      if (!cur) return nullptr;
    } else if (cur->is_seq()) {
      std::size_t idx = 0;
      auto r = std::from_chars(seg.data(), seg.data() + seg.size(), idx);
      if (r.ec != std::errc() || r.ptr != seg.data() + seg.size() || idx >= cur->size()) {
        return nullptr;
      }
      cur = &cur->item(idx);
    } else {
      return nullptr;
    }
  }
  return cur;
}

std::string pointer_append(std::string_view base, std::string_view segment) {
  std::string out(base);
  out += '/';
  for (char c : segment) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string pointer_append(std::string_view base, std::size_t index) {
  return std::string(base) + "/" + std::to_string(index);
}

std::string quote_scalar(std::string_view value) {
  bool plain = !value.empty();
  if (plain) {
    static const std::string_view indicators = "-?:,[]{}#&*!|>'\"%@`";
    char f = value.front();
    if (indicators.find(f) != std::string_view::npos) {
      bool dash_ok = (f == '-' || f == '?' || f == ':') && value.size() > 1 &&
                     value[1] != ' ';
      if (!dash_ok) plain = false;
    }
    if (value.front() == ' ' || value.back() == ' ') plain = false;
    if (value.find(": ") != std::string_view::npos ||
        value.find(" #") != std::string_view::npos || value.back() == ':') {
      plain = false;
    }
    for (char c : value) {
      if (c == '\n' || c == '\r' || c == '\t' || static_cast<unsigned char>(c) < 0x20) {
        plain = false;
      }
    }
    if (plain) {
      Node probe;
      probe.kind = NodeKind::Scalar;
      probe.text = std::string(value);
      if (probe.is_null() || probe.as_bool() || probe.as_float()) plain = false;
    }
  }
  if (plain) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\x";
          out += hex[(c >> 4) & 0xF];
          out += hex[c & 0xF];
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

}  // namespace dqa::yaml
