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

// qa: command-line front end for the deployment-model checks.
//
// Exit codes: 0 clean, 1 findings at or above the threshold (or violated
// goals), 2 usage error, 3 load or parse error, 4 state space limit hit,
// 5 fix could not be applied.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deployqa/catalog.hpp"
#include "deployqa/config.hpp"
#include "deployqa/csar.hpp"
#include "deployqa/fix.hpp"
#include "deployqa/perf.hpp"
#include "deployqa/petri.hpp"
#include "deployqa/pipeline.hpp"
#include "deployqa/report.hpp"
#include "deployqa/smells.hpp"
#include "deployqa/yaml.hpp"

namespace fs = std::filesystem;
using namespace dqa;

namespace {

enum Exit : int { kClean = 0, kFindings = 1, kUsage = 2, kLoad = 3, kLimit = 4, kFixFailed = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::string catalog;
  std::string severity;
  std::optional<std::size_t> max_markings;
};

// Resolves configuration with precedence flag > config file > built-in.
struct Settings {
  Config config;
  Catalog catalog;
  Severity threshold = Severity::Medium;
  std::size_t max_markings = kDefaultMaxMarkings;
};

Settings resolve(const CommonFlags& flags) {
  Settings s;
  if (!flags.config.empty()) {
    if (!fs::is_regular_file(flags.config)) throw UsageError("config file not found: " + flags.config);
    s.config = load_config(flags.config);
  } else {
    s.config = discover_config(fs::current_path());
  }

  std::optional<fs::path> catalog_path;
  if (!flags.catalog.empty()) {
    catalog_path = flags.catalog;
  } else if (const char* env = std::getenv("QA_CATALOG"); env && *env) {
    catalog_path = fs::path(env);
  } else if (s.config.catalog) {
    catalog_path = s.config.catalog;
  }
  s.catalog = load_catalog(catalog_path);

  if (!flags.severity.empty()) {
    s.threshold = *severity_from(flags.severity);
  } else if (s.config.severity_threshold) {
    s.threshold = *s.config.severity_threshold;
  }
  if (flags.max_markings) {
    s.max_markings = *flags.max_markings;
  } else if (s.config.max_markings) {
    s.max_markings = *s.config.max_markings;
  }
  return s;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_threshold = true) {
  cmd->add_option("--config", flags.config, "Configuration file (default: ./qa.yaml when present)");
  cmd->add_option("--catalog", flags.catalog, "Defect catalog YAML (overrides QA_CATALOG and config)");
  if (with_threshold) {
    cmd->add_option("--severity-threshold", flags.severity, "Lowest severity that fails the run (default: medium)")
        ->check(CLI::IsMember({"info", "low", "medium", "high", "error"}));
  }
  cmd->add_option("--max-markings", flags.max_markings, "Reachability limit for workflow analysis")
      ->check(CLI::PositiveNumber);
}

void require_path(const std::string& path) {
  std::error_code ec;
  if (!fs::exists(path, ec)) throw UsageError("no such file or directory: " + path);
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + out);
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string path;
  std::string format = "text";
  std::string output;
  bool timings = false;
  CommonFlags common;
};

int cmd_check(const CheckArgs& a) {
  require_path(a.path);
  Settings s = resolve(a.common);
  RuleContext ctx(s.catalog);
  apply_config(s.config, ctx);
  CheckOptions opts;
  opts.max_markings = s.max_markings;
  opts.record_timings = a.timings;
  Report report = run_check(fs::path(a.path), ctx, opts);

  ReportFormat fmt = a.format == "json" ? ReportFormat::Json
                     : a.format == "sarif" ? ReportFormat::Sarif
                                           : ReportFormat::Text;
  write_output(a.output, render(report, fmt, s.catalog, a.timings));
  if (!report.complete) {
    for (const auto& r : report.incomplete_reasons) std::cerr << "qa: analysis incomplete: " << r << '\n';
    return kLimit;
  }
  return any_at_or_above(report.findings, s.threshold) ? kFindings : kClean;
}

// --- fix -------------------------------------------------------------------

struct FixArgs {
  std::string path;
  std::vector<std::string> rules;
  bool dry_run = false;
  bool apply = false;
  CommonFlags common;
};

int cmd_fix(const FixArgs& a) {
  require_path(a.path);
  Settings s = resolve(a.common);
  RuleContext ctx(s.catalog);
  apply_config(s.config, ctx);
  CsarArchive archive = load_input(a.path);
  if (a.apply && archive.zipped) throw UsageError("fixes can only be applied to an unpacked package");
  CheckOptions opts;
  opts.max_markings = s.max_markings;
  Report report = run_check(archive, ctx, opts, a.path);
  std::set<std::string> rules(a.rules.begin(), a.rules.end());
  FixRun run = plan_fixes(archive, report, s.catalog, rules);

  if (!a.apply) {
    std::cout << to_json(run).dump(2) << '\n';
    return kClean;
  }
  fs::path root = fs::is_directory(a.path) ? fs::path(a.path) : fs::path(a.path).parent_path();
  if (root.empty()) root = ".";
  apply_fixes(root, run);
  for (const auto& f : run.files) {
    if (f.applied.empty()) continue;
    std::cout << "patched " << f.patch.file << ": " << f.applied.size() << " fix(es), " << f.patch.edits.size()
              << " edit(s)\n";
  }
  for (const auto& f : run.files) {
    for (const auto& adv : f.advice) {
      std::cout << "advice " << adv.finding.span.file << ':' << adv.finding.span.start_line << " ["
                << adv.finding.rule_id << "] " << adv.finding.message << '\n';
      for (const auto& plan : adv.plans) {
        std::cout << "  " << plan.resolution.id << ": " << plan.resolution.description;
        if (!plan.unbound.empty()) {
          std::cout << " (needs:";
          for (const auto& p : plan.unbound) std::cout << ' ' << p;
          std::cout << ')';
        }
        std::cout << '\n';
      }
    }
  }
  std::cout << run.patch_count() << " fix(es) applied, " << run.advice_count() << " finding(s) need manual action\n";
  return kClean;
}

// --- petri -----------------------------------------------------------------

struct PetriArgs {
  std::string path;
  std::string format = "dot";
  std::string out;
  bool analyze = false;
  CommonFlags common;
};

int cmd_petri(const PetriArgs& a) {
  require_path(a.path);
  Settings s = resolve(a.common);
  CsarArchive archive = load_input(a.path);
  if (archive.entry_blueprint.empty()) {
    std::cerr << "qa: " << a.path << " has no topology to build a workflow net from\n";
    return kLoad;
  }
  PetriNet net = build_workflow_net(archive);
  write_output(a.out, export_net(net, a.format == "pnml" ? NetFormat::Pnml : NetFormat::Dot));
  if (!a.analyze) return kClean;

  ReachabilityGraph graph = reachability_graph(net, s.max_markings);
  if (!graph.complete) {
    std::cerr << "qa: workflow state space exceeds " << s.max_markings << " markings\n";
    return kLimit;
  }
  Report report;
  report.tool_version = std::string(version());
  report.input = a.path;
  report.findings = detect_deadlocks(graph, net, s.catalog);
  auto dead = dead_transitions(graph, net, s.catalog);
  report.findings.insert(report.findings.end(), dead.begin(), dead.end());
  sort_and_dedupe(report.findings);
  std::cout << "reachable markings: " << graph.markings.size() << '\n' << render_text(report);
  return report.findings.empty() ? kClean : kFindings;
}

// --- perf ------------------------------------------------------------------

struct PerfArgs {
  std::string data;
  std::size_t degree = 1;
  bool degree_given = false;
  std::string goals;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot read " + p.generic_string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::ordered_json model_json(const PerfModel& m) {
  return {{"degree", m.degree},         {"coefficients", m.coefficients}, {"rmse", m.rmse},
          {"n", m.n},                   {"predictor", m.predictor_name},  {"response", m.response_name}};
}

int cmd_perf_fit(const PerfArgs& a) {
  PerfModel m = fit_ols(ingest_benchmark(slurp(a.data)), a.degree);
  std::cout << model_json(m).dump(2) << '\n';
  return kClean;
}

int cmd_perf_check(const PerfArgs& a) {
  fs::path goals_path(a.goals);
  std::map<std::string, std::string> inputs;
  inputs[goals_path.generic_string()] = slurp(goals_path);
  auto specs = parse_goals(inputs.begin()->second, goals_path.generic_string());
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
  Report report;
  report.tool_version = std::string(version());
  report.input = a.goals;
  bool violated = false;
  for (const auto& spec : specs) {
    fs::path data = a.data.empty() ? goals_path.parent_path() / spec.data : fs::path(a.data);
    std::size_t degree = a.degree_given ? a.degree : spec.degree;
    std::string& csv = inputs[data.generic_string()];
    if (csv.empty()) csv = slurp(data);
    PerfModel m = fit_ols(ingest_benchmark(csv), degree);
    Verdict v = check_goal(m, spec.goal);
    verdicts.push_back({{"response", spec.goal.response_name},
                        {"comparator", to_string(spec.goal.comparator)},
                        {"threshold", spec.goal.threshold},
                        {"at", spec.goal.at},
                        {"satisfied", v.satisfied},
                        {"predicted", v.predicted},
                        {"margin", v.margin},
                        {"rmse", v.rmse},
                        {"model", model_json(m)}});
    if (!v.satisfied) {
      violated = true;
      report.findings.push_back(goal_finding(builtin_catalog(), spec, v));
    }
  }
  sort_and_dedupe(report.findings);
  report.input_digest = input_digest(inputs);
  nlohmann::ordered_json out;
  out["verdicts"] = std::move(verdicts);
  out["report"] = to_json(report);
  std::cout << out.dump(2) << '\n';
  return violated ? kFindings : kClean;
}

template <class F>
int guarded(F&& run) {
  try {
    return run();
  } catch (const UsageError& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidOverride& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kUsage;
  } catch (const UnknownRule& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kUsage;
  } catch (const LoadError& e) {
    const auto& sp = e.span();
    std::cerr << "qa: " << (sp.file.empty() ? "" : sp.file + ":" + std::to_string(sp.start_line) + ": ")
              << to_string(e.kind()) << ": " << e.what() << '\n';
    return kLoad;
  } catch (const yaml::ParseError& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kLoad;
  } catch (const CatalogLoadError& e) {
    std::cerr << "qa: catalog: " << e.what() << '\n';
    for (const auto& v : e.violations()) std::cerr << "  " << v.rule_id << ": " << v.message << '\n';
    return kLoad;
  } catch (const PerfError& e) {
    std::cerr << "qa: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == PerfError::Kind::BadDegree ? kUsage : kLoad;
  } catch (const UnboundPlaybook& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kLoad;
  } catch (const IncompleteGraph& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kLimit;
  } catch (const FixError& e) {
    std::cerr << "qa: fix failed (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kFixFailed;
  } catch (const ApplyError& e) {
    std::cerr << "qa: fix failed: " << e.what() << '\n';
    return kFixFailed;
  } catch (const std::exception& e) {
    std::cerr << "qa: " << e.what() << '\n';
    return kLoad;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality checks for TOSCA/Ansible deployment packages", "qa"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Analyze a package, blueprint or playbook");
  c->add_option("path", check.path, "CSAR archive, package directory, blueprint or playbook")->required();
  c->add_option("--format", check.format, "text, json or sarif")->check(CLI::IsMember({"text", "json", "sarif"}));
  c->add_option("-o,--output", check.output, "Write the report to a file instead of stdout");
  c->add_flag("--timings", check.timings, "Include per-stage timings");
  add_common(c, check.common);

  FixArgs fix;
  auto* f = app.add_subcommand("fix", "Recommend and apply catalog fixes");
  f->add_option("path", fix.path, "Package directory, blueprint or playbook")->required();
  f->add_option("--rule", fix.rules, "Only fix findings of these rules (repeatable)");
  auto* dry = f->add_flag("--dry-run", fix.dry_run, "Print patches as JSON without touching files (default)");
  auto* apply = f->add_flag("--apply", fix.apply, "Write the patched files");
  dry->excludes(apply);
  add_common(f, fix.common, false);

  PetriArgs petri;
  auto* p = app.add_subcommand("petri", "Export and analyze the provisioning workflow net");
  p->add_option("path", petri.path, "Package, directory or blueprint")->required();
  p->add_option("--export", petri.format, "dot or pnml")->check(CLI::IsMember({"dot", "pnml"}));
  p->add_option("--out", petri.out, "Output file (default: stdout)");
  p->add_flag("--analyze", petri.analyze, "Also report deadlocks and dead steps");
  add_common(p, petri.common, false);

  PerfArgs perf;
  auto* pf = app.add_subcommand("perf", "Fit performance models and check goals");
  pf->require_subcommand(1);
  auto* fit = pf->add_subcommand("fit", "Fit a polynomial model to benchmark data");
  fit->add_option("--data", perf.data, "Benchmark CSV")->required();
  fit->add_option("--degree", perf.degree, "Polynomial degree")->check(CLI::NonNegativeNumber);
  auto* pc = pf->add_subcommand("check", "Evaluate performance goals");
  pc->add_option("--goals", perf.goals, "Goals YAML")->required();
  pc->add_option("--data", perf.data, "Benchmark CSV for every goal (default: as listed in the goals file)");
  auto* deg = pc->add_option("--degree", perf.degree, "Polynomial degree for every goal")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  perf.degree_given = deg->count() > 0;

  if (c->parsed()) return guarded([&] { return cmd_check(check); });
  if (f->parsed()) return guarded([&] { return cmd_fix(fix); });
  if (p->parsed()) return guarded([&] { return cmd_petri(petri); });
  if (fit->parsed()) return guarded([&] { return cmd_perf_fit(perf); });
  if (pc->parsed()) return guarded([&] { return cmd_perf_check(perf); });
  return kUsage;
}
