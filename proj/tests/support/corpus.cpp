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

#include "support/corpus.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dqa::testing {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

}  // namespace

PetriNet random_net(Rng& rng, std::size_t max_places) {
  NetBuilder b;
  const std::size_t np = 2 + pick(rng, max_places - 1);
  std::vector<std::size_t> places;
  for (std::size_t i = 0; i < np; ++i) places.push_back(b.place("p" + std::to_string(i)));
  std::size_t tcount = 0;
  auto transition = [&]() { return b.transition("t" + std::to_string(tcount++)); };

  // Backbone: a chain with occasional choices and joins over the places.
  for (std::size_t i = 0; i + 1 < np; ++i) {
    std::size_t t = transition();
    b.input(places[i], t);
    b.output(t, places[i + 1]);
    if (chance(rng, 0.3)) {  // alternative branch converging on the same place
      std::size_t alt = transition();
      b.input(places[i], alt);
      b.output(alt, places[std::min(np - 1, i + 1 + pick(rng, 2))]);
    }
    if (chance(rng, 0.25)) b.test(places[pick(rng, np)], t);  // read a place
  }
  // Random extra transitions: joins, forks, loops back, unconnected steps.
  std::size_t extra = pick(rng, 4);
  for (std::size_t k = 0; k < extra; ++k) {
    std::size_t t = transition();
    std::size_t ins = pick(rng, 3);
    for (std::size_t i = 0; i < ins; ++i) b.input(places[pick(rng, np)], t);
    if (chance(rng, 0.4)) b.test(places[pick(rng, np)], t);
    std::size_t outs = 1 + pick(rng, 2);
    for (std::size_t i = 0; i < outs; ++i) b.output(t, places[pick(rng, np)]);
  }
  b.mark(places[0]);
  if (chance(rng, 0.3)) b.mark(places[pick(rng, np)]);
  b.terminal(places[np - 1]);
  if (chance(rng, 0.3)) b.terminal(places[pick(rng, np)]);
  // Random nets may put a second token on any place; only the workflow nets
  // carry the stricter 1-safety contract.
  for (auto p : places) b.allow_merge(p);
  return b.build();
}

TopologyShape random_topology_shape(Rng& rng, std::size_t max_nodes, double edge_probability) {
  TopologyShape s;
  std::size_t n = 1 + pick(rng, max_nodes);
  for (std::size_t i = 0; i < n; ++i) s.nodes.push_back("node_" + std::to_string(i));
  for (const auto& a : s.nodes) {
    for (const auto& c : s.nodes) {
      if (chance(rng, edge_probability)) s.edges.emplace_back(a, c);
    }
  }
  return s;
}

std::string topology_text(const TopologyShape& shape) {
  std::string text =
      "tosca_definitions_version: tosca_simple_yaml_1_3\n"
      "topology_template:\n"
      "  node_templates:\n";
  for (const auto& n : shape.nodes) {
    text += "    " + n + ":\n      type: tosca.nodes.Root\n";
    bool first = true;
    for (const auto& [s, t] : shape.edges) {
      if (s != n) continue;
      if (first) text += "      requirements:\n";
      first = false;
      text += "        - dependency: " + t + "\n";
    }
  }
  return text;
}

// ---------------------------------------------------------------------------
// Smell corpus. Text is assembled with zero-width markers around every
// injected span; stripping them yields the file and the manifest at once.

namespace {

const std::string kClose = "\x03";
std::string open_mark(const std::string& rule) { return "\x01" + rule + "\x02"; }

std::string strip_markers(const std::string& marked, const std::string& file,
                          std::vector<InjectedSmell>& manifest) {
  std::string out;
  std::vector<std::pair<std::string, std::size_t>> stack;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    char c = marked[i];
    if (c == '\x01') {
      std::size_t sep = marked.find('\x02', i);
      stack.emplace_back(marked.substr(i + 1, sep - i - 1), out.size());
      i = sep;
    } else if (c == '\x03') {
      if (stack.empty()) throw std::logic_error("unbalanced corpus marker");
      manifest.push_back({stack.back().first, file, stack.back().second, out.size()});
      stack.pop_back();
    } else {
      out += c;
    }
  }
  if (!stack.empty()) throw std::logic_error("unclosed corpus marker");
  return out;
}

using Lines = std::vector<std::string>;

// Renders one sequence item whose mapping lines start at column 0.
Lines item(const Lines& lines, const std::string& indent) {
  Lines out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.push_back(indent + (i == 0 ? "- " : "  ") + lines[i]);
  }
  return out;
}

Lines wrap(Lines lines, const std::string& rule) {
  lines.front() = open_mark(rule) + lines.front();
  lines.back() += kClose;
  return lines;
}

std::string hex(Rng& rng, std::size_t n) {
  static const char* kDigits = "0123456789abcdef";
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += kDigits[rng() % 16];
  return s;
}

struct Task {
  Lines lines;
  std::size_t leaves = 1;
  bool notifies = false;
};

class PlaybookWriter {
 public:
  explicit PlaybookWriter(Rng& rng) : rng_(rng) {}

  std::string uid() { return std::to_string(++counter_); }

  Task clean_task(bool allow_block) {
    std::string k = uid();
    Task t;
    switch (pick(rng_, allow_block ? 11 : 10)) {
      case 0:
        t.lines = {"name: install pkg" + k, "package:", "  name: pkg" + k, "  state: present"};
        break;
      case 1:
        t.lines = {"name: create dir " + k, "file:", "  path: /opt/app" + k, "  state: directory",
                   "  mode: \"0755\""};
        break;
      case 2:
        t.lines = {"name: render config " + k, "template:", "  src: app" + k + ".j2",
                   "  dest: /etc/app" + k + ".conf"};
        t.notifies = true;
        break;
      case 3:
        t.lines = {"name: start svc" + k, "service:", "  name: svc" + k, "  state: started",
                   "  enabled: true"};
        break;
      case 4:
        t.lines = {"name: fetch archive " + k, "get_url:", "  url: https://dl.example.org/a" + k + ".tgz",
                   "  dest: /tmp/a" + k + ".tgz", "  checksum: \"sha256:" + hex(rng_, 64) + "\""};
        break;
      case 5:
        t.lines = {"name: set option " + k, "lineinfile:", "  path: /etc/app.conf",
                   "  line: \"option_" + k + "=on\""};
        break;
      case 6:
        t.lines = {"name: report " + k, "debug:", "  msg: step " + k + " done"};
        break;
      case 7:
        t.lines = {"name: one-time setup " + k,
                   "command: /usr/local/bin/setup-" + k + " creates=/opt/setup-" + k + ".done"};
        break;
      case 8:
        t.lines = {"name: query health " + k, "uri:", "  url: http://localhost:80" + k + "/health",
                   "  status_code: 200"};
        t.lines.push_back(chance(rng_, 0.5) ? "ignore_errors: false" : "changed_when: false");
        break;
      case 9:
        t.lines = {"name: copy file " + k, "copy:", "  src: f" + k, "  dest: /opt/f" + k};
        t.lines.push_back(chance(rng_, 0.5) ? "when: enable_" + k : "when: count_" + k + " == 3");
        break;
      default: {
        Task a = clean_task(false);
        std::string r = uid();
        t.lines = {"name: guarded step " + k, "block:"};
        for (auto& l : item(a.lines, "  ")) t.lines.push_back(l);
        t.lines.push_back("rescue:");
        for (auto& l : item({"name: recover " + r, "debug:", "  msg: recovering " + r}, "  ")) {
          t.lines.push_back(l);
        }
        t.leaves = 2;
        t.notifies = a.notifies;
        break;
      }
    }
    return t;
  }

  // Tasks carrying one smell each. The returned lines contain the markers.
  Task smelly_task(const std::string& rule) {
    std::string k = uid();
    Task t;
    auto m = [&](const std::string& text) { return open_mark(rule) + text + kClose; };
    if (rule == "S001") {
      t.lines = {"name: db user " + k, "mysql_user:", "  name: app" + k,
                 "  password: " + m("Pw" + k + "x" + hex(rng_, 6))};
    } else if (rule == "S002") {
      t.lines = {"name: db user " + k, "mysql_user:", "  name: app" + k, "  password: " + m("\"\"")};
    } else if (rule == "S003") {
      std::string who = chance(rng_, 0.5) ? "root" : "admin";
      t.lines = {"name: account " + k, "user:", "  name: " + m(who), "  comment: account " + k};
    } else if (rule == "S004") {
      t.lines = {"name: bind " + k, "set_fact:", "  listen_host: " + m("0.0.0.0")};
    } else if (rule == "S005") {
      t.lines = {"name: fetch " + k, "get_url:",
                 "  url: " + m("http://mirror" + k + ".example.com/p.tgz"), "  dest: /tmp/p" + k,
                 "  checksum: \"sha256:" + hex(rng_, 64) + "\""};
    } else if (rule == "S007") {
      if (chance(rng_, 0.5)) {
        t.lines = {"name: fetch " + k, m("get_url") + ":", "  url: https://dl.example.org/" + k,
                   "  dest: /tmp/d" + k};
      } else {
        t.lines = {"name: download " + k, m("uri") + ":", "  url: https://api.example.org/" + k,
                   "  dest: /tmp/u" + k};
      }
    } else if (rule == "S008") {
      t.lines = {"name: hash " + k, "set_fact:", "  digest_algorithm: " + m(chance(rng_, 0.5) ? "md5" : "sha1")};
    } else if (rule == "I001") {
      t.lines = wrap({"file:", "  path: /srv/i" + k, "  state: directory"}, rule);
    } else if (rule == "I002") {
      std::string mod = chance(rng_, 0.5) ? "command" : "shell";
      t.lines = {"name: run job " + k, m(mod) + ": /opt/bin/job-" + k + " --run"};
    } else if (rule == "I003") {
      t.lines = {"name: flaky " + k, "service:", "  name: flaky" + k, "  state: restarted",
                 "ignore_errors: " + m(chance(rng_, 0.5) ? "true" : "yes")};
    } else if (rule == "I004") {
      switch (pick(rng_, 3)) {
        case 0:
          t.lines = {"name: container " + k, m("docker") + ":", "  name: c" + k, "  image: nginx"};
          break;
        case 1:
          t.lines = {"name: include " + k, m("include") + ": extra_" + k + ".yml"};
          break;
        default:
          t.lines = {"name: facts " + k, m("ec2_facts") + ":"};
          break;
      }
    } else if (rule == "I005") {
      std::string lit = chance(rng_, 0.5) ? "true" : "false";
      t.lines = {"name: maybe " + k, "debug:", "  msg: conditional " + k,
                 "when: " + m("feature_" + k + " == " + lit)};
    } else {
      throw std::logic_error("no task injection for " + rule);
    }
    return t;
  }

  std::string var_smell(const std::string& rule) {
    std::string k = uid();
    auto m = [&](const std::string& text) { return open_mark(rule) + text + kClose; };
    if (rule == "S001") return "api_token_" + k + ": " + m("tok" + hex(rng_, 12));
    if (rule == "S002") return "admin_password_" + k + ": " + m("''");
    if (rule == "S004") return "bind_address_" + k + ": " + m("0.0.0.0");
    if (rule == "S005") return "mirror_url_" + k + ": " + m("\"http://pkg" + k + ".example.net/repo\"");
    if (rule == "S008") return "hash_type_" + k + ": " + m("MD5");
    throw std::logic_error("no var injection for " + rule);
  }

  Lines clean_vars() {
    std::string k = uid();
    Lines v = {"app_port_" + k + ": 80" + k, "app_user_" + k + ": svc" + k};
    if (chance(rng_, 0.5)) v.push_back("db_password_" + k + ": \"{{ vault_db_password }}\"");
    if (chance(rng_, 0.5)) v.push_back("hash_algorithm_" + k + ": sha256");
    if (chance(rng_, 0.5)) v.push_back("local_api_" + k + ": http://127.0.0.1:8080/");
    if (chance(rng_, 0.3)) v.push_back("repo_url_" + k + ": https://repo.example.org/" + k);
    return v;
  }

  struct PlaySpec {
    Lines vars;
    std::vector<Task> tasks;
    std::vector<std::pair<std::size_t, std::string>> comments;  // before task index
    std::string mark_rule;  // wrap the whole play
  };

  PlaySpec clean_play(std::size_t tasks, bool allow_block) {
    PlaySpec p;
    p.vars = clean_vars();
    std::size_t leaves = 0;
    while (p.tasks.size() < tasks) {
      Task t = clean_task(allow_block && leaves + 2 <= 20);
      leaves += t.leaves;
      p.tasks.push_back(std::move(t));
    }
    if (chance(rng_, 0.4)) p.comments.emplace_back(pick(rng_, p.tasks.size()), "# configure step");
    return p;
  }

  Lines render(const PlaySpec& p) {
    std::string k = uid();
    Lines out = {"name: play " + k, "hosts: group" + k};
    if (!p.vars.empty()) {
      out.push_back("vars:");
      for (const auto& v : p.vars) out.push_back("  " + v);
    }
    out.push_back("tasks:");
    bool notified = false;
    for (std::size_t i = 0; i <= p.tasks.size(); ++i) {
      for (const auto& [at, text] : p.comments) {
        if (at == i) out.push_back("  " + text);
      }
      if (i == p.tasks.size()) break;
      Lines lines = p.tasks[i].lines;
      if (p.tasks[i].notifies) {
        // A marker wrapping the whole task must also cover the notify line.
        std::string close;
        if (!lines.back().empty() && lines.back().back() == '\x03') {
          lines.back().pop_back();
          close = "\x03";
        }
        lines.push_back("notify: restart svc" + k + close);
        notified = true;
      }
      for (auto& l : item(lines, "  ")) out.push_back(l);
    }
    if (notified) {
      out.push_back("handlers:");
      for (auto& l : item({"name: restart svc" + k, "service:", "  name: svc" + k, "  state: restarted"}, "  ")) {
        out.push_back(l);
      }
    }
    if (!p.mark_rule.empty()) out = wrap(out, p.mark_rule);
    return out;
  }

  std::string playbook(const std::vector<PlaySpec>& plays, const std::string& file_rule = {}) {
    std::string text = "---\n# deployment playbook\n";
    if (!file_rule.empty()) text = open_mark(file_rule) + kClose + text;
    for (const auto& p : plays) {
      for (const auto& l : item(render(p), "")) text += l + "\n";
    }
    return text;
  }

 private:
  static std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
  static bool chance(Rng& rng, double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

  Rng& rng_;
  std::size_t counter_ = 0;
};

class BlueprintWriter {
 public:
  explicit BlueprintWriter(Rng& rng) : rng_(rng) {}

  struct NodeSpec {
    std::map<std::string, std::string> overrides;  // property -> marked value
    std::size_t dependencies = 0;
    std::string mark_rule;  // marks the node name
  };

  std::string smell_value(const std::string& rule, std::string& property) {
    auto m = [&](const std::string& text) { return open_mark(rule) + text + kClose; };
    if (rule == "S001") { property = "db_password"; return m("Secr3t" + std::to_string(++counter_)); }
    if (rule == "S002") { property = "db_password"; return m("\"\""); }
    if (rule == "S003") { property = "user"; return m(chance(0.5) ? "root" : "admin"); }
    if (rule == "S004") { property = "bind_address"; return m("0.0.0.0"); }
    if (rule == "S005") { property = "repo_url"; return m("http://repo" + std::to_string(++counter_) + ".example.com/x"); }
    if (rule == "S008") { property = "hash_algorithm"; return m("sha1"); }
    throw std::logic_error("no property injection for " + rule);
  }

  std::string blueprint(const std::vector<NodeSpec>& nodes, const std::vector<std::string>& input_smells) {
    std::string text =
        "tosca_definitions_version: tosca_simple_yaml_1_3\n"
        "node_types:\n"
        "  corpus.nodes.Service:\n"
        "    derived_from: tosca.nodes.Root\n"
        "    properties:\n";
    for (const char* p : {"db_password", "bind_address", "repo_url", "hash_algorithm", "user"}) {
      text += std::string("      ") + p + ": {type: string, required: false}\n";
    }
    text += "      port: {type: integer, required: false}\n";
    text += "topology_template:\n  inputs:\n    db_pw:\n      type: string\n";
    for (std::size_t i = 0; i < input_smells.size(); ++i) {
      text += "    service_token_" + std::to_string(i) + ":\n      type: string\n      default: " +
              input_smells[i] + "\n";
    }
    text += "  node_templates:\n    host_vm:\n      type: tosca.nodes.Compute\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& n = nodes[i];
      std::string name = "svc_" + std::to_string(i);
      std::string key = n.mark_rule.empty() ? name : open_mark(n.mark_rule) + name + kClose;
      std::map<std::string, std::string> props = {
          {"db_password", "{ get_input: db_pw }"},
          {"bind_address", "10.0." + std::to_string(i / 200) + "." + std::to_string(i % 200 + 1)},
          {"repo_url", "https://repo.example.org/" + std::to_string(i)},
          {"hash_algorithm", "sha256"},
          {"user", "svc" + std::to_string(i)},
          {"port", std::to_string(8000 + i)}};
      for (const auto& [p, v] : n.overrides) props[p] = v;
      text += "    " + key + ":\n      type: corpus.nodes.Service\n      properties:\n";
      for (const auto& [p, v] : props) text += "        " + p + ": " + v + "\n";
      text += "      requirements:\n        - host: host_vm\n";
      for (std::size_t d = 0; d < n.dependencies; ++d) {
        text += "        - dependency: svc_" + std::to_string(i + 1 + d) + "\n";
      }
    }
    return text;
  }

 private:
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  Rng& rng_;
  std::size_t counter_ = 0;
};

const std::vector<std::string> kPlaybookTaskRules = {"S001", "S002", "S003", "S004", "S005", "S007",
                                                     "S008", "I001", "I002", "I003", "I004", "I005"};
const std::vector<std::string> kPlaybookVarRules = {"S001", "S002", "S004", "S005", "S008"};

}  // namespace

Corpus generate_corpus(Rng& rng, std::size_t clean_playbooks, std::size_t clean_blueprints,
                       std::size_t injections) {
  Corpus c;
  PlaybookWriter pw(rng);
  BlueprintWriter bw(rng);
  auto add = [&](const std::string& file, const std::string& marked, bool playbook) {
    c.files[file] = strip_markers(marked, file, c.manifest);
    (playbook ? c.playbooks : c.blueprints).push_back(file);
  };

  for (std::size_t i = 0; i < clean_playbooks; ++i) {
    std::vector<PlaybookWriter::PlaySpec> plays;
    std::size_t n = 1 + pick(rng, 3);
    for (std::size_t p = 0; p < n; ++p) plays.push_back(pw.clean_play(2 + pick(rng, 8), true));
    add("playbooks/clean_" + std::to_string(i) + ".yml", pw.playbook(plays), true);
  }
  for (std::size_t i = 0; i < clean_blueprints; ++i) {
    add("blueprints/clean_" + std::to_string(i) + ".yaml",
        bw.blueprint(std::vector<BlueprintWriter::NodeSpec>(1 + pick(rng, 4)), {}), false);
  }

  // Every kind of injection, cycled so each rule appears.
  const std::vector<std::string> kinds = {
      "pb:S001", "pb:S002", "pb:S003", "pb:S004", "pb:S005", "pb:S006", "pb:S007", "pb:S008",
      "pb:I001", "pb:I002", "pb:I003", "pb:I004", "pb:I005", "pb:D001", "pb:D002", "pb:D003",
      "bp:S001", "bp:S002", "bp:S003", "bp:S004", "bp:S005", "bp:S008", "bp:D010"};
  std::vector<std::string> pending;
  for (std::size_t i = 0; i < injections; ++i) pending.push_back(kinds[i % kinds.size()]);
  std::shuffle(pending.begin(), pending.end(), rng);

  std::vector<std::string> pb_small, bp_small;
  std::size_t files = 0;
  for (const auto& kind : pending) {
    std::string rule = kind.substr(3);
    std::string idx = std::to_string(files);
    if (rule == "D001") {
      auto play = pw.clean_play(21, false);
      play.mark_rule = "D001";
      add("playbooks/long_" + idx + ".yml", pw.playbook({play}), true);
      ++files;
    } else if (rule == "D002") {
      auto play = pw.clean_play(1 + pick(rng, 4), false);
      Task original = pw.clean_task(false);
      Task copy = original;
      copy.lines[0] = "name: again " + pw.uid();
      copy.lines = wrap(copy.lines, "D002");
      std::size_t at = pick(rng, play.tasks.size() + 1);
      play.tasks.insert(play.tasks.begin() + static_cast<std::ptrdiff_t>(at), original);
      play.tasks.push_back(copy);
      add("playbooks/dup_" + idx + ".yml", pw.playbook({play}), true);
      ++files;
    } else if (rule == "D003") {
      std::string text;
      while (std::count(text.begin(), text.end(), '\n') <= 200) {
        std::vector<PlaybookWriter::PlaySpec> plays;
        for (int p = 0; p < 4; ++p) plays.push_back(pw.clean_play(16, false));
        text = pw.playbook(plays, "D003");
      }
      add("playbooks/mono_" + idx + ".yml", text, true);
      ++files;
    } else if (rule == "D010") {
      std::vector<BlueprintWriter::NodeSpec> nodes(12);
      nodes[0].dependencies = 10;
      nodes[0].mark_rule = "D010";
      add("blueprints/hub_" + idx + ".yaml", bw.blueprint(nodes, {}), false);
      ++files;
    } else {
      (kind[0] == 'p' ? pb_small : bp_small).push_back(rule);
    }
  }

  // Remaining injections, one to three per file.
  for (std::size_t i = 0; i < pb_small.size();) {
    std::size_t take = std::min(pb_small.size() - i, 1 + pick(rng, 3));
    std::vector<PlaybookWriter::PlaySpec> plays;
    std::size_t n = 1 + pick(rng, 2);
    for (std::size_t p = 0; p < n; ++p) plays.push_back(pw.clean_play(1 + pick(rng, 5), true));
    for (std::size_t j = 0; j < take; ++j) {
      const std::string& rule = pb_small[i + j];
      auto& play = plays[pick(rng, plays.size())];
      bool as_var = std::find(kPlaybookVarRules.begin(), kPlaybookVarRules.end(), rule) !=
                        kPlaybookVarRules.end() &&
                    chance(rng, 0.5);
      if (rule == "S006") {
        static const char* kWords[] = {"TODO", "FIXME", "HACK"};
        play.comments.emplace_back(pick(rng, play.tasks.size() + 1),
                                   open_mark(rule) + "# " + kWords[pick(rng, 3)] + ": revisit " + pw.uid() + kClose);
      } else if (as_var) {
        play.vars.push_back(pw.var_smell(rule));
      } else {
        std::size_t at = pick(rng, play.tasks.size() + 1);
        play.tasks.insert(play.tasks.begin() + static_cast<std::ptrdiff_t>(at), pw.smelly_task(rule));
      }
    }
    add("playbooks/inj_" + std::to_string(files++) + ".yml", pw.playbook(plays), true);
    i += take;
  }
  for (std::size_t i = 0; i < bp_small.size();) {
    std::size_t take = std::min(bp_small.size() - i, 1 + pick(rng, 3));
    std::vector<BlueprintWriter::NodeSpec> nodes(take + pick(rng, 2));
    std::vector<std::string> inputs;
    for (std::size_t j = 0; j < take; ++j) {
      const std::string& rule = bp_small[i + j];
      std::string property;
      std::string value = bw.smell_value(rule, property);
      if (rule == "S001" && chance(rng, 0.3)) {
        inputs.push_back(value);
      } else {
        nodes[j].overrides[property] = value;
      }
    }
    add("blueprints/inj_" + std::to_string(files++) + ".yaml", bw.blueprint(nodes, inputs), false);
    i += take;
  }
  std::sort(c.manifest.begin(), c.manifest.end());
  return c;
}

}  // namespace dqa::testing
