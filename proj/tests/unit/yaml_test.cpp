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

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "deployqa/yaml.hpp"
#include "deployqa/yaml_json.hpp"

using namespace dqa;

namespace {

std::string slice(std::string_view text, const yaml::Range& r) {
  return std::string(text.substr(r.start.byte, r.end.byte - r.start.byte));
}

}  // namespace

TEST_CASE("block mapping with nested sequence") {
  const std::string text =
      "a: 1\n"
      "b:\n"
      "  - x\n"
      "  - y: 2\n"
      "    z: [1, 2]\n"
      "c: {k: v}\n";
  auto doc = yaml::parse(text, "t.yaml");
  REQUIRE(doc.root.is_map());
  CHECK(doc.root.size() == 3);
  const auto* b = doc.root.find("b");
  REQUIRE(b);
  REQUIRE(b->is_seq());
  CHECK(b->size() == 2);
  CHECK(b->item(0).text == "x");
  CHECK(b->item(1).find("y")->as_int() == 2);
  CHECK(b->item(1).find("z")->is_seq());
  CHECK(b->item(1).find("z")->flow);
  CHECK(doc.root.find("c")->find("k")->text == "v");
  CHECK(slice(text, doc.root.find("a")->range) == "1");
  CHECK(slice(text, doc.root.find("c")->range) == "{k: v}");
}

TEST_CASE("sequence indented at the parent key") {
  auto doc = yaml::parse("tasks:\n- name: a\n  debug: msg=1\n- shell: ls\n");
  const auto* tasks = doc.root.find("tasks");
  REQUIRE(tasks);
  REQUIRE(tasks->is_seq());
  CHECK(tasks->size() == 2);
  CHECK(tasks->item(1).find("shell")->text == "ls");
}

TEST_CASE("scalar styles decode") {
  const std::string text =
      "p: plain text here\n"
      "s: 'it''s'\n"
      "d: \"tab\there\u0041\"\n"
      "l: |\n"
      "  line1\n"
      "  line2\n"
      "f: >-\n"
      "  folded\n"
      "  text\n"
      "e: \"\"\n"
      "n: ~\n";
  auto doc = yaml::parse(text);
  CHECK(doc.root.find("p")->text == "plain text here");
  CHECK(doc.root.find("s")->text == "it's");
  CHECK(doc.root.find("d")->text == "tab\there" "A");
  CHECK(doc.root.find("l")->text == "line1\nline2\n");
  CHECK(doc.root.find("l")->style == yaml::ScalarStyle::Literal);
  CHECK(doc.root.find("f")->text == "folded text");
  CHECK(doc.root.find("e")->text.empty());
  CHECK_FALSE(doc.root.find("e")->is_null());
  CHECK(doc.root.find("n")->is_null());
}

TEST_CASE("multi-line plain scalars fold") {
  auto doc = yaml::parse("when: a and\n  b\nx: 1\n");
  CHECK(doc.root.find("when")->text == "a and b");
  CHECK(doc.root.find("x")->as_int() == 1);
}

TEST_CASE("typed views follow the core schema") {
  auto doc = yaml::parse("a: true\nb: False\nc: yes\nd: 0x1F\ne: 1.5e3\nf: '1'\ng: .inf\n");
  CHECK(doc.root.find("a")->as_bool() == true);
  CHECK(doc.root.find("b")->as_bool() == false);
  CHECK_FALSE(doc.root.find("c")->as_bool().has_value());
  CHECK(doc.root.find("d")->as_int() == 31);
  CHECK(doc.root.find("e")->as_float() == doctest::Approx(1500.0));
  CHECK_FALSE(doc.root.find("f")->as_int().has_value());
  CHECK(std::isinf(*doc.root.find("g")->as_float()));
}

TEST_CASE("comments are recorded with ranges") {
  const std::string text = "# head\na: 1 # trailing\n# TODO later\n";
  auto doc = yaml::parse(text);
  REQUIRE(doc.comments.size() == 3);
  CHECK(doc.comments[1].text == " trailing");
  CHECK(slice(text, doc.comments[2].range) == "# TODO later");
  CHECK(doc.comments[2].range.start.line == 3);
}

TEST_CASE("hash inside scalars is not a comment") {
  auto doc = yaml::parse("url: http://x/#frag\nq: 'a # b'\n");
  CHECK(doc.root.find("url")->text == "http://x/#frag");
  CHECK(doc.comments.empty());
}

TEST_CASE("anchors and aliases") {
  auto doc = yaml::parse("base: &b {x: 1}\ncopy: *b\n");
  const auto* copy = doc.root.find("copy");
  REQUIRE(copy);
  CHECK(copy->is_map());
  CHECK(copy->find("x")->as_int() == 1);
}

TEST_CASE("duplicate keys are preserved") {
  auto doc = yaml::parse("a: 1\na: 2\n");
  CHECK(doc.root.size() == 2);
  CHECK(doc.root.find("a")->as_int() == 1);
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(yaml::parse("a: [1, 2\n"), yaml::ParseError);
  CHECK_THROWS_AS(yaml::parse("a:\n\t- x\n"), yaml::ParseError);
  CHECK_THROWS_AS(yaml::parse("a: \"unterminated\n"), yaml::ParseError);
  CHECK_THROWS_AS(yaml::parse(std::string("a: \xff\xfe\n")), yaml::ParseError);
  try {
    yaml::parse("a: 1\nb: [\n", "f.yaml");
    FAIL("expected a parse error");
  } catch (const yaml::ParseError& e) {
    CHECK(e.file() == "f.yaml");
    CHECK(e.at().line >= 2);
  }
}

TEST_CASE("pointers navigate mappings and sequences") {
  auto doc = yaml::parse("- tasks:\n    - name: a\n    - name: b/c\n");
  const auto* n = yaml::at_pointer(doc.root, "/0/tasks/1/name");
  REQUIRE(n);
  CHECK(n->text == "b/c");
  CHECK(yaml::at_pointer(doc.root, "/0/tasks/5") == nullptr);
  CHECK(yaml::pointer_append("/a", "x/y") == "/a/x~1y");
  CHECK(yaml::pointer_segments("/a/x~1y/~0") == std::vector<std::string>{"a", "x/y", "~"});
}

TEST_CASE("quote_scalar round-trips") {
  for (std::string s : {"plain", "", "true", "123", "a: b", "- x", "#c", "{{ var }}", "x #y",
                        "multi\nline", "'q'", " lead", "trail ", "null", "@at", "it's"}) {
    auto doc = yaml::parse("k: " + yaml::quote_scalar(s) + "\n");
    CAPTURE(s);
    CHECK(doc.root.find("k")->text == s);
    CHECK_FALSE(doc.root.find("k")->is_null());
    if (doc.root.find("k")->is_plain()) {
      CHECK_FALSE(doc.root.find("k")->as_bool().has_value());
      CHECK_FALSE(doc.root.find("k")->as_float().has_value());
    }
  }
}

TEST_CASE("every node span re-parses to an equal node") {
  const std::string text =
      "- hosts: all\n"
      "  vars:\n"
      "    port: 8080\n"
      "  tasks:\n"
      "    - name: install\n"
      "      apt: {name: nginx, state: present}\n"
      "    - block:\n"
      "        - shell: echo hi\n"
      "      rescue:\n"
      "        - debug: msg=fail\n"
      "    - copy:\n"
      "        content: |\n"
      "          hello\n"
      "        dest: /tmp/x\n";
  auto doc = yaml::parse(text);
  std::vector<const yaml::Node*> stack{&doc.root};
  int checked = 0;
  while (!stack.empty()) {
    const yaml::Node* n = stack.back();
    stack.pop_back();
    for (const auto& c : n->children()) stack.push_back(&c);
    if (n->is_null() || (n->is_scalar() && !n->is_plain())) continue;
    // Block collections are re-parsed at column 0 with their indentation
    // stripped by prefixing spaces up to their original column.
    std::string piece = std::string(n->range.start.col - 1, ' ') + slice(text, n->range);
    auto re = yaml::parse(piece);
    CAPTURE(piece);
    CHECK(yaml::structurally_equal(re.root, *n));
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("emit_yaml round-trips JSON values") {
  std::mt19937 rng(7);
  auto rand_scalar = [&]() -> nlohmann::ordered_json {
    switch (rng() % 5) {
      case 0: return static_cast<int>(rng() % 1000) - 500;
      case 1: return (rng() % 2) == 0;
      case 2: return nullptr;
      case 3: return std::string("s") + std::to_string(rng() % 100) + (rng() % 2 ? ": x" : "");
      default: return std::string(rng() % 2 ? "" : "{{ v }}");
    }
  };
  std::function<nlohmann::ordered_json(int)> gen = [&](int depth) -> nlohmann::ordered_json {
    if (depth == 0 || rng() % 3 == 0) return rand_scalar();
    if (rng() % 2) {
      nlohmann::ordered_json o = nlohmann::ordered_json::object();
      int n = rng() % 4;
      for (int i = 0; i < n; ++i) o["k" + std::to_string(i)] = gen(depth - 1);
      return o;
    }
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    int n = rng() % 4;
    for (int i = 0; i < n; ++i) a.push_back(gen(depth - 1));
    return a;
  };
  for (int i = 0; i < 300; ++i) {
    nlohmann::ordered_json v = nlohmann::ordered_json::object();
    v["root"] = gen(4);
    std::string text = emit_yaml(v);
    CAPTURE(text);
    auto doc = yaml::parse(text);
    CHECK(to_json(doc.root) == nlohmann::json::parse(v.dump()));
  }
}
