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

#include "deployqa/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "deployqa/perf.hpp"
#include "deployqa/topology.hpp"

namespace dqa {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  Stopwatch(Report& report, bool enabled) : report_(report), enabled_(enabled) {}
  void lap(const std::string& stage) {
    auto now = Clock::now();
    if (enabled_) {
      double ms = std::chrono::duration<double, std::milli>(now - last_).count();
      report_.timings.push_back({stage, ms});
    }
    last_ = now;
  }

 private:
  Report& report_;
  bool enabled_;
  Clock::time_point last_ = Clock::now();
};

std::string parent_dir(const std::string& file) {
  auto slash = file.rfind('/');
  return slash == std::string::npos ? std::string() : file.substr(0, slash + 1);
}

void check_goals(const CsarArchive& archive, const RuleContext& ctx, std::vector<Finding>& out) {
  const std::string& goals_file = *archive.perf_goals;
  auto specs = parse_goals(archive.files.at(goals_file), goals_file);
  std::map<std::pair<std::string, std::size_t>, PerfModel> models;
  for (const auto& spec : specs) {
    std::string data = parent_dir(goals_file) + spec.data;
    auto it = archive.files.find(data);
    if (it == archive.files.end()) {
      throw PerfError(PerfError::Kind::EmptyData, goals_file + ": data file '" + spec.data + "' not in package");
    }
    auto key = std::make_pair(data, spec.degree);
    auto model = models.find(key);
    if (model == models.end()) {
      model = models.emplace(key, fit_ols(ingest_benchmark(it->second), spec.degree)).first;
    }
    Verdict v = check_goal(model->second, spec.goal);
    if (!v.satisfied) out.push_back(goal_finding(ctx.catalog(), spec, v));
  }
}

}  // namespace

Report run_check(const CsarArchive& archive, const RuleContext& ctx, const CheckOptions& options,
                 const std::string& input_label) {
  Report report;
  report.tool_version = std::string(version());
  report.input = input_label.empty() ? archive.root : input_label;
  report.input_digest = input_digest(archive.files);
  Stopwatch watch(report, options.record_timings);
  const Catalog& catalog = ctx.catalog();
  std::vector<Finding> found;
  const bool has_topology = !archive.entry_blueprint.empty();

  if (has_topology) {
    auto v = verify_topology(archive.topology, catalog);
    found.insert(found.end(), v.begin(), v.end());
  }
  watch.lap("verify");

  if (has_topology) {
    PetriNet net = build_workflow_net(archive);
    ReachabilityGraph graph = reachability_graph(net, options.max_markings);
    if (!graph.complete) {
      report.complete = false;
      report.incomplete_reasons.push_back("workflow state space exceeds " + std::to_string(options.max_markings) +
                                          " markings; deadlock and dead-step analysis skipped");
    } else {
      auto d = detect_deadlocks(graph, net, catalog);
      found.insert(found.end(), d.begin(), d.end());
      auto t = dead_transitions(graph, net, catalog);
      found.insert(found.end(), t.begin(), t.end());
    }
  }
  watch.lap("workflow");

  if (has_topology) {
    auto s = detect_topology_smells(archive.topology, ctx);
    found.insert(found.end(), s.begin(), s.end());
  }
  for (const auto& [path, playbook] : archive.playbooks) {
    auto s = detect_playbook_smells(playbook, ctx);
    found.insert(found.end(), s.begin(), s.end());
  }
  watch.lap("smells");

  if (archive.perf_goals) check_goals(archive, ctx, found);
  watch.lap("perf");

  std::erase_if(found, [&](const Finding& f) { return !ctx.enabled(f.rule_id); });
  sort_and_dedupe(found);
  report.findings = std::move(found);
  return report;
}

Report run_check(const fs::path& path, const RuleContext& ctx, const CheckOptions& options) {
  auto start = Clock::now();
  CsarArchive archive = load_input(path);
  double load_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  Report report = run_check(archive, ctx, options, path.generic_string());
  if (options.record_timings) report.timings.insert(report.timings.begin(), {"load", load_ms});
  return report;
}

std::size_t FixRun::patch_count() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.applied.size();
  return n;
}

std::size_t FixRun::advice_count() const {
  std::size_t n = 0;
  for (const auto& f : files) n += f.advice.size();
  return n;
}

FixRun plan_fixes(const CsarArchive& archive, const Report& report, const Catalog& catalog,
                  const std::set<std::string>& rules) {
  for (const auto& r : rules) {
    if (!catalog.find(r)) throw UnknownRule(r);
  }
  std::map<std::string, std::vector<Finding>> by_file;
  for (const auto& f : report.findings) {
    if (!rules.empty() && !rules.count(f.rule_id)) continue;
    if (!archive.files.count(f.span.file)) continue;
    by_file[f.span.file].push_back(f);
  }
  FixRun run;
  for (const auto& [file, findings] : by_file) {
    const std::string& text = archive.files.at(file);
    run.files.push_back(fix_file(file, findings, text, catalog, sha256_hex(text)));
    run.files.back().patch.file = file;
  }
  return run;
}

namespace {

std::string read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ApplyError("cannot read " + p.generic_string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void apply_fixes(const fs::path& root, const FixRun& run) {
  struct Pending {
    fs::path target;
    fs::path temp;
  };
  std::vector<std::pair<fs::path, std::string>> outputs;
  for (const auto& f : run.files) {
    if (f.patch.edits.empty()) continue;
    fs::path target = root / f.patch.file;
    std::string current = read_all(target);
    if (sha256_hex(current) != f.patch.base_digest) {
      throw FixError(FixError::Kind::StaleSource, f.patch.file + " changed since it was analyzed");
    }
    outputs.emplace_back(target, apply_patch(current, f.patch));
  }

  std::vector<Pending> pending;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& p : pending) fs::remove(p.temp, ec);
  };
  for (const auto& [target, text] : outputs) {
    fs::path temp = target;
    temp += ".qa-tmp";
    pending.push_back({target, temp});
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
      discard();
      throw ApplyError("cannot write " + temp.generic_string());
    }
    std::error_code ec;
    fs::permissions(temp, fs::status(target, ec).permissions(), ec);
  }
  for (const auto& p : pending) {
    std::error_code ec;
    fs::rename(p.temp, p.target, ec);
    if (ec) {
      discard();
      throw ApplyError("cannot replace " + p.target.generic_string() + ": " + ec.message());
    }
  }
}

nlohmann::json to_json(const FixRun& run) {
  nlohmann::json patches = nlohmann::json::array();
  nlohmann::json advice = nlohmann::json::array();
  for (const auto& f : run.files) {
    if (!f.patch.edits.empty()) {
      auto p = to_json(f.patch);
      nlohmann::json applied = nlohmann::json::array();
      for (const auto& plan : f.applied) {
        applied.push_back({{"rule_id", plan.finding.rule_id},
                           {"resolution", plan.resolution.id},
                           {"subject", plan.finding.subject}});
      }
      p["resolutions"] = std::move(applied);
      patches.push_back(std::move(p));
    }
    for (const auto& a : f.advice) {
      nlohmann::json options = nlohmann::json::array();
      for (const auto& plan : a.plans) {
        options.push_back({{"resolution", plan.resolution.id},
                           {"description", plan.resolution.description},
                           {"auto_fixable", plan.resolution.auto_fixable},
                           {"unbound", plan.unbound}});
      }
      advice.push_back({{"rule_id", a.finding.rule_id},
                        {"file", a.finding.span.file},
                        {"line", a.finding.span.start_line},
                        {"subject", a.finding.subject},
                        {"message", a.finding.message},
                        {"resolutions", std::move(options)}});
    }
  }
  return {{"patches", std::move(patches)}, {"advice", std::move(advice)}};
}

}  // namespace dqa
