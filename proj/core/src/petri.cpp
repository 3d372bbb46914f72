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

#include "deployqa/petri.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "deployqa/csar.hpp"
#include "deployqa/topology.hpp"

namespace dqa {

// ---------------------------------------------------------------------------
// Marking

bool Marking::contains(const Marking& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((other.words_[i] & ~words_[i]) != 0) return false;
  }
  return true;
}

bool Marking::intersects(const Marking& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((other.words_[i] & words_[i]) != 0) return true;
  }
  return false;
}

void Marking::subtract(const Marking& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
}

void Marking::merge(const Marking& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
}

bool Marking::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
}

std::vector<std::size_t> Marking::places() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::size_t b = 0; b < 64; ++b) {
      if ((words_[i] >> b) & 1u) out.push_back(i * 64 + b);
    }
  }
  return out;
}

std::size_t Marking::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (auto w : words_) {
    h ^= static_cast<std::size_t>(w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
  return h;
}

// ---------------------------------------------------------------------------
// PetriNet

std::size_t PetriNet::place_index(const std::string& id) const {
  for (std::size_t i = 0; i < places.size(); ++i) {
    if (places[i].id == id) return i;
  }
  throw InvalidNet("unknown place " + id);
}

std::size_t PetriNet::transition_index(const std::string& id) const {
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    if (transitions[i].id == id) return i;
  }
  throw InvalidNet("unknown transition " + id);
}

bool PetriNet::has_place(const std::string& id) const {
  return std::any_of(places.begin(), places.end(), [&](const Place& p) { return p.id == id; });
}

bool PetriNet::has_transition(const std::string& id) const {
  return std::any_of(transitions.begin(), transitions.end(),
                     [&](const Transition& t) { return t.id == id; });
}

void PetriNet::validate() const {
  std::set<std::string> ids;
  for (const auto& p : places) {
    if (!ids.insert(p.id).second) throw InvalidNet("duplicate id " + p.id);
  }
  std::set<std::string> tids;
  for (const auto& t : transitions) {
    if (!ids.insert(t.id).second) throw InvalidNet("duplicate id " + t.id);
    tids.insert(t.id);
  }
  for (const auto& a : arcs) {
    bool p2t = has_place(a.src) && tids.count(a.dst);
    bool t2p = tids.count(a.src) && has_place(a.dst);
    if (!p2t && !t2p) throw InvalidNet("arc " + a.src + " -> " + a.dst + " is not place/transition");
    if (a.kind == ArcKind::Test && !p2t) throw InvalidNet("test arc must run from a place");
  }
  for (const auto& id : terminal_places) {
    if (!has_place(id)) throw InvalidNet("unknown terminal place " + id);
  }
}

// ---------------------------------------------------------------------------
// NetBuilder

std::size_t NetBuilder::place(const std::string& id, const std::string& label) {
  if (place_ids_.count(id) || transition_ids_.count(id)) throw InvalidNet("duplicate id " + id);
  place_ids_.emplace(id, places_.size());
  places_.push_back({id, label.empty() ? id : label});
  return places_.size() - 1;
}

std::size_t NetBuilder::transition(const std::string& id, const std::string& label, SourceSpan origin,
                                   std::string subject) {
  if (place_ids_.count(id) || transition_ids_.count(id)) throw InvalidNet("duplicate id " + id);
  transition_ids_.emplace(id, transitions_.size());
  transitions_.push_back({id, label.empty() ? id : label, std::move(origin), std::move(subject)});
  return transitions_.size() - 1;
}

void NetBuilder::input(std::size_t p, std::size_t t) {
  arcs_.push_back({places_.at(p).id, transitions_.at(t).id, ArcKind::Normal});
}

void NetBuilder::output(std::size_t t, std::size_t p) {
  arcs_.push_back({transitions_.at(t).id, places_.at(p).id, ArcKind::Normal});
}

void NetBuilder::test(std::size_t p, std::size_t t) {
  arcs_.push_back({places_.at(p).id, transitions_.at(t).id, ArcKind::Test});
}

void NetBuilder::mark(std::size_t p) { marked_.push_back(p); }
void NetBuilder::terminal(std::size_t p) { terminal_.insert(places_.at(p).id); }
void NetBuilder::allow_merge(std::size_t p) { merge_.insert(places_.at(p).id); }

PetriNet NetBuilder::build() const {
  PetriNet net;
  net.places = places_;
  net.transitions = transitions_;
  net.arcs = arcs_;
  net.initial = Marking(places_.size());
  for (auto p : marked_) net.initial.set(p);
  net.terminal_places = terminal_;
  net.merge_places = merge_;
  return net;
}

// ---------------------------------------------------------------------------
// Workflow construction

namespace {

class WorkflowBuilder {
 public:
  explicit WorkflowBuilder(const TopologyModel& t) : topo_(t) {}

  PetriNet run(const PlaybookBinding& playbooks) {
    std::vector<const NodeTemplate*> nodes;
    std::set<std::string> seen;
    for (const auto& n : topo_.node_templates) {
      if (seen.insert(n.name).second) nodes.push_back(&n);
    }
    for (const auto& [name, _] : playbooks) {
      if (!seen.count(name)) throw UnboundPlaybook(name);
    }
    std::map<std::string, std::size_t> started;
    std::map<std::string, std::size_t> create;
    for (const NodeTemplate* n : nodes) {
      const std::string& N = n->name;
      std::size_t ready = b_.place("p_ready_" + N, N + " ready");
      std::size_t created = b_.place("p_created_" + N, N + " created");
      std::size_t configured = b_.place("p_configured_" + N, N + " configured");
      std::size_t done = b_.place("p_started_" + N, N + " started");
      b_.mark(ready);
      b_.terminal(done);
      std::size_t tc = b_.transition("t_create_" + N, "create " + N, n->name_span, n->pointer);
      b_.input(ready, tc);
      b_.output(tc, created);
      node_ = N;
      counter_ = 0;
      auto it = playbooks.find(N);
      if (it == playbooks.end() || it->second.empty()) {
        std::size_t t = b_.transition("t_configure_" + N, "configure " + N, n->name_span, n->pointer);
        b_.input(created, t);
        b_.output(t, configured);
      } else {
        std::size_t cur = created;
        const auto& books = it->second;
        for (std::size_t i = 0; i < books.size(); ++i) {
          cur = playbook(*books[i], cur, i + 1 == books.size() ? configured : npos);
        }
      }
      std::size_t ts = b_.transition("t_start_" + N, "start " + N, n->name_span, n->pointer);
      b_.input(configured, ts);
      b_.output(ts, done);
      started.emplace(N, done);
      create.emplace(N, tc);
    }
    for (const auto& e : dependency_graph(topo_).edges) {
      b_.test(started.at(e.target), create.at(e.source));
    }
    return b_.build();
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::string fresh(const std::string& what) {
    return node_ + "_" + std::to_string(++counter_) + "_" + what;
  }

  std::size_t target_or_new(std::size_t target) {
    return target != npos ? target : b_.place("p_" + fresh("s"));
  }

  std::size_t playbook(const PlaybookModel& pb, std::size_t pre, std::size_t target) {
    if (pb.plays.empty()) {
      if (target == npos) return pre;
      std::size_t t = b_.transition("t_" + fresh("empty"), "empty playbook " + pb.file,
                                    SourceSpan::at_start(pb.file), "");
      b_.input(pre, t);
      b_.output(t, target);
      return target;
    }
    std::size_t cur = pre;
    for (std::size_t i = 0; i < pb.plays.size(); ++i) {
      cur = play(pb.plays[i], cur, i + 1 == pb.plays.size() ? target : npos);
    }
    return cur;
  }

  std::size_t play(const Play& p, std::size_t pre, std::size_t target) {
    handlers_.clear();
    for (std::size_t h = 0; h < p.handlers.size(); ++h) {
      std::size_t place = b_.place("p_notified_" + fresh("h"),
                                   "notified " + p.handlers[h].name.value_or("handler"));
      b_.allow_merge(place);
      handler_places_.push_back(place);
      if (p.handlers[h].name) handlers_.emplace(*p.handlers[h].name, place);
      if (!p.handlers[h].listen.empty()) handlers_.emplace(p.handlers[h].listen, place);
    }
    std::size_t first_handler = handler_places_.size() - p.handlers.size();
    std::size_t cur = chain(p.tasks, pre, p.handlers.empty() ? target : npos);
    for (std::size_t h = 0; h < p.handlers.size(); ++h) {
      const TaskNode& handler = p.handlers[h];
      std::size_t post = h + 1 == p.handlers.size() ? target_or_new(target) : b_.place("p_" + fresh("s"));
      std::string label = handler.name.value_or(handler.module.value_or("handler"));
      std::size_t flush = b_.transition("t_flush_" + fresh("h"), "run handler " + label, handler.span,
                                        handler.pointer);
      b_.input(cur, flush);
      b_.input(handler_places_[first_handler + h], flush);
      b_.output(flush, post);
      std::size_t skip = b_.transition("t_noflush_" + fresh("h"), "skip handler " + label, handler.span,
                                       handler.pointer);
      b_.input(cur, skip);
      b_.output(skip, post);
      cur = post;
    }
    handlers_.clear();
    return cur;
  }

  std::size_t chain(const std::vector<TaskNode>& tasks, std::size_t pre, std::size_t target) {
    if (tasks.empty()) {
      if (target == npos || target == pre) return pre;
      std::size_t t = b_.transition("t_" + fresh("pass"), "pass", SourceSpan{}, "");
      b_.input(pre, t);
      b_.output(t, target);
      return target;
    }
    std::size_t cur = pre;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      std::size_t post = i + 1 == tasks.size() ? target_or_new(target) : b_.place("p_" + fresh("s"));
      task(tasks[i], cur, post);
      cur = post;
    }
    return cur;
  }

  void notify_arcs(const TaskNode& t, std::size_t transition) {
    for (const auto& h : t.notify) {
      auto it = handlers_.find(h);
      if (it != handlers_.end()) b_.output(transition, it->second);
    }
  }

  std::string label_of(const TaskNode& t) const {
    if (t.name && !t.name->empty()) return *t.name;
    if (t.module) return *t.module;
    return "block";
  }

  void task(const TaskNode& t, std::size_t pre, std::size_t post) {
    std::string label = label_of(t);
    if (t.kind == TaskNode::Kind::Task) {
      if (t.when_expr) {
        std::size_t run = b_.transition("t_exec_" + fresh("task"), label, t.span, t.pointer);
        b_.input(pre, run);
        b_.output(run, post);
        notify_arcs(t, run);
        std::size_t skip = b_.transition("t_skip_" + fresh("task"), "skip " + label, t.span, t.pointer);
        b_.input(pre, skip);
        b_.output(skip, post);
      } else {
        std::size_t run = b_.transition("t_run_" + fresh("task"), label, t.span, t.pointer);
        b_.input(pre, run);
        b_.output(run, post);
        notify_arcs(t, run);
      }
      return;
    }
    std::size_t enter = pre;
    if (t.when_expr) {
      enter = b_.place("p_" + fresh("s"));
      std::size_t in = b_.transition("t_enter_" + fresh("block"), "enter " + label, t.span, t.pointer);
      b_.input(pre, in);
      b_.output(in, enter);
      std::size_t skip = b_.transition("t_skip_" + fresh("block"), "skip " + label, t.span, t.pointer);
      b_.input(pre, skip);
      b_.output(skip, post);
    }
    std::size_t converge = t.always.empty() ? post : b_.place("p_" + fresh("s"));
    if (!t.rescue.empty()) {
      std::size_t body_end = chain(t.children, enter, npos);
      if (body_end == enter) {
        body_end = b_.place("p_" + fresh("s"));
        std::size_t pass = b_.transition("t_" + fresh("pass"), "pass", t.span, t.pointer);
        b_.input(enter, pass);
        b_.output(pass, body_end);
      }
      std::size_t ok = b_.transition("t_ok_" + fresh("block"), label + " succeeded", t.span, t.pointer);
      b_.input(body_end, ok);
      b_.output(ok, converge);
      std::size_t rescue_start = b_.place("p_" + fresh("rescue"));
      std::size_t fail = b_.transition("t_fail_" + fresh("block"), label + " failed", t.span, t.pointer);
      b_.input(body_end, fail);
      b_.output(fail, rescue_start);
      chain(t.rescue, rescue_start, converge);
    } else {
      chain(t.children, enter, converge);
    }
    if (!t.always.empty()) chain(t.always, converge, post);
  }

  const TopologyModel& topo_;
  NetBuilder b_;
  std::string node_;
  std::size_t counter_ = 0;
  std::map<std::string, std::size_t> handlers_;
  std::vector<std::size_t> handler_places_;
};

}  // namespace

PetriNet build_workflow_net(const TopologyModel& topology, const PlaybookBinding& playbooks) {
  return WorkflowBuilder(topology).run(playbooks);
}

PetriNet build_workflow_net(const CsarArchive& archive) {
  PlaybookBinding binding;
  for (const auto& [node, paths] : archive.node_playbooks) {
    for (const auto& p : paths) binding[node].push_back(&archive.playbooks.at(p));
  }
  return build_workflow_net(archive.topology, binding);
}

// ---------------------------------------------------------------------------
// Reachability

namespace {

struct Compiled {
  std::vector<Marking> consume;  // normal input places
  std::vector<Marking> require;  // normal and test input places
  std::vector<Marking> produce;
  Marking merge_ok;
};

Compiled compile(const PetriNet& net) {
  net.validate();
  const std::size_t np = net.places.size();
  std::unordered_map<std::string, std::size_t> pidx;
  std::unordered_map<std::string, std::size_t> tidx;
  for (std::size_t i = 0; i < np; ++i) pidx.emplace(net.places[i].id, i);
  for (std::size_t i = 0; i < net.transitions.size(); ++i) tidx.emplace(net.transitions[i].id, i);
  Compiled c;
  c.consume.assign(net.transitions.size(), Marking(np));
  c.require.assign(net.transitions.size(), Marking(np));
  c.produce.assign(net.transitions.size(), Marking(np));
  c.merge_ok = Marking(np);
  for (const auto& id : net.merge_places) c.merge_ok.set(pidx.at(id));
  for (const auto& a : net.arcs) {
    if (auto p = pidx.find(a.src); p != pidx.end()) {
      std::size_t t = tidx.at(a.dst);
      c.require[t].set(p->second);
      if (a.kind == ArcKind::Normal) c.consume[t].set(p->second);
    } else {
      c.produce[tidx.at(a.src)].set(pidx.at(a.dst));
    }
  }
  return c;
}

struct MarkingHash {
  std::size_t operator()(const Marking& m) const { return m.hash(); }
};

}  // namespace

std::vector<std::size_t> enabled_transitions(const PetriNet& net, const Marking& m) {
  Compiled c = compile(net);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    if (m.contains(c.require[t])) out.push_back(t);
  }
  return out;
}

ReachabilityGraph reachability_graph(const PetriNet& net, std::size_t max_markings) {
  Compiled c = compile(net);
  ReachabilityGraph g;
  g.max_markings = max_markings;
  std::unordered_map<Marking, std::size_t, MarkingHash> index;
  g.markings.push_back(net.initial);
  g.parent_edge.push_back(-1);
  index.emplace(net.initial, 0);
  // Firing order follows transition ids so witness ties resolve by id.
  std::vector<std::size_t> order(net.transitions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return net.transitions[a].id < net.transitions[b].id;
  });
  std::size_t head = 0;
  while (head < g.markings.size()) {
    if (!g.complete) break;
    const Marking m = g.markings[head];
    ++g.visited;
    for (std::size_t t : order) {
      if (!m.contains(c.require[t])) continue;
      Marking next = m;
      next.subtract(c.consume[t]);
      if (next.intersects(c.produce[t])) {
        for (auto p : c.produce[t].places()) {
          if (next.test(p) && !c.merge_ok.test(p)) g.unexpected_merges.insert(p);
        }
      }
      next.merge(c.produce[t]);
      auto it = index.find(next);
      std::size_t to;
      if (it == index.end()) {
        if (g.markings.size() >= max_markings) {
          g.complete = false;
          break;
        }
        to = g.markings.size();
        index.emplace(next, to);
        g.markings.push_back(next);
        g.parent_edge.push_back(static_cast<std::ptrdiff_t>(g.edges.size()));
      } else {
        to = it->second;
      }
      g.edges.push_back({head, t, to});
    }
    ++head;
  }
  return g;
}

std::vector<std::size_t> witness_path(const ReachabilityGraph& graph, std::size_t index) {
  std::vector<std::size_t> path;
  while (graph.parent_edge.at(index) >= 0) {
    const auto& e = graph.edges[static_cast<std::size_t>(graph.parent_edge[index])];
    path.push_back(e.transition);
    index = e.from;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<std::size_t> dead_markings(const ReachabilityGraph& graph, const PetriNet& net) {
  if (!graph.complete) throw IncompleteGraph(graph.max_markings);
  std::vector<bool> has_out(graph.markings.size(), false);
  for (const auto& e : graph.edges) has_out[e.from] = true;
  Marking terminal(net.places.size());
  for (const auto& id : net.terminal_places) terminal.set(net.place_index(id));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < graph.markings.size(); ++i) {
    if (!has_out[i] && !graph.markings[i].contains(terminal)) out.push_back(i);
  }
  return out;
}

namespace {

std::string marking_ids(const PetriNet& net, const Marking& m) {
  std::vector<std::string> ids;
  for (auto p : m.places()) ids.push_back(net.places[p].id);
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : ",") + id;
  return out;
}

}  // namespace

std::vector<Finding> detect_deadlocks(const ReachabilityGraph& graph, const PetriNet& net,
                                      const Catalog& catalog) {
  Compiled c = compile(net);
  std::vector<Finding> out;
  for (std::size_t i : dead_markings(graph, net)) {
    const Marking& m = graph.markings[i];
    // Blame the first transition that is partly enabled: it holds some of
    // its inputs but waits forever for the rest.
    const Transition* stuck = nullptr;
    std::vector<std::string> waiting_for;
    for (std::size_t t = 0; t < net.transitions.size() && !stuck; ++t) {
      if (!m.intersects(c.require[t])) continue;
      stuck = &net.transitions[t];
      Marking missing = c.require[t];
      missing.subtract(m);
      for (auto p : missing.places()) waiting_for.push_back(net.places[p].id);
    }
    std::vector<std::string> marking;
    for (auto p : m.places()) marking.push_back(net.places[p].id);
    std::sort(marking.begin(), marking.end());
    std::vector<std::string> path;
    for (auto t : witness_path(graph, i)) path.push_back(net.transitions[t].id);
    nlohmann::json data = {{"marking", marking}, {"witness", path}};
    SourceSpan span;
    std::string subject = "#deadlock:" + marking_ids(net, m);
    std::string msg = "workflow deadlock after " + std::to_string(path.size()) + " step(s)";
    if (stuck) {
      span = stuck->origin;
      subject = stuck->subject + subject;
      data["blocked"] = stuck->id;
      data["waiting_for"] = waiting_for;
      msg += ": " + stuck->label + " waits for";
      for (const auto& w : waiting_for) msg += " " + w;
    }
    out.push_back(make_finding(catalog, "W101", msg, span, subject, data));
  }
  return out;
}

std::vector<Finding> dead_transitions(const ReachabilityGraph& graph, const PetriNet& net,
                                      const Catalog& catalog) {
  if (!graph.complete) throw IncompleteGraph(graph.max_markings);
  std::vector<bool> fired(net.transitions.size(), false);
  for (const auto& e : graph.edges) fired[e.transition] = true;
  std::vector<Finding> out;
  for (std::size_t t = 0; t < net.transitions.size(); ++t) {
    if (fired[t]) continue;
    const Transition& tr = net.transitions[t];
    out.push_back(make_finding(catalog, "W102", "step can never run: " + tr.label, tr.origin,
                               tr.subject + "#" + tr.id, {{"transition", tr.id}}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Export

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    if (ch == '\n') {
      out += "\\n";
      continue;
    }
    out += ch;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string to_dot(const PetriNet& net) {
  std::ostringstream os;
  os << "digraph workflow {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < net.places.size(); ++i) {
    const auto& p = net.places[i];
    os << "  " << dot_quote(p.id) << " [shape=ellipse, label=" << dot_quote(p.label);
    if (net.initial.test(i)) os << ", style=bold";
    if (net.terminal_places.count(p.id)) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& t : net.transitions) {
    os << "  " << dot_quote(t.id) << " [shape=box, label=" << dot_quote(t.label) << "];\n";
  }
  for (const auto& a : net.arcs) {
    os << "  " << dot_quote(a.src) << " -> " << dot_quote(a.dst);
    if (a.kind == ArcKind::Test) os << " [style=dashed, arrowhead=none]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_pnml(const PetriNet& net) {
  std::map<std::string, std::string> ids;
  for (std::size_t i = 0; i < net.places.size(); ++i) ids[net.places[i].id] = "p" + std::to_string(i);
  for (std::size_t i = 0; i < net.transitions.size(); ++i) {
    ids[net.transitions[i].id] = "t" + std::to_string(i);
  }
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n"
     << "  <net id=\"workflow\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n"
     << "    <name><text>workflow</text></name>\n"
     << "    <page id=\"page0\">\n";
  for (std::size_t i = 0; i < net.places.size(); ++i) {
    const auto& p = net.places[i];
    os << "      <place id=\"" << ids[p.id] << "\">\n"
       << "        <name><text>" << xml_escape(p.id) << "</text></name>\n";
    if (net.initial.test(i)) os << "        <initialMarking><text>1</text></initialMarking>\n";
    os << "      </place>\n";
  }
  for (const auto& t : net.transitions) {
    os << "      <transition id=\"" << ids[t.id] << "\">\n"
       << "        <name><text>" << xml_escape(t.id) << "</text></name>\n"
       << "      </transition>\n";
  }
  std::size_t arc = 0;
  for (const auto& a : net.arcs) {
    if (a.kind == ArcKind::Test) {
      os << "      <!-- test arc " << xml_escape(a.src) << " -> " << xml_escape(a.dst)
         << " lowered to a consume/produce pair -->\n";
      os << "      <arc id=\"a" << arc++ << "\" source=\"" << ids[a.src] << "\" target=\"" << ids[a.dst]
         << "\"/>\n";
      os << "      <arc id=\"a" << arc++ << "\" source=\"" << ids[a.dst] << "\" target=\"" << ids[a.src]
         << "\"/>\n";
    } else {
      os << "      <arc id=\"a" << arc++ << "\" source=\"" << ids[a.src] << "\" target=\"" << ids[a.dst]
         << "\"/>\n";
    }
  }
  os << "    </page>\n  </net>\n</pnml>\n";
  return os.str();
}

}  // namespace

std::string export_net(const PetriNet& net, NetFormat format) {
  return format == NetFormat::Dot ? to_dot(net) : to_pnml(net);
}

}  // namespace dqa
