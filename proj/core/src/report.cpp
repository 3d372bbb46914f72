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

#include "deployqa/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "deployqa/source.hpp"

#ifndef DEPLOYQA_VERSION
#define DEPLOYQA_VERSION "0.0.0"
#endif

namespace dqa {

using nlohmann::json;

std::string_view version() { return DEPLOYQA_VERSION; }

std::vector<SummaryRow> summarize(const std::vector<Finding>& findings) {
  std::map<std::tuple<DefectClass, Category, Severity>, std::size_t> counts;
  for (const auto& f : findings) ++counts[{f.cls, f.category, f.severity}];
  std::vector<SummaryRow> rows;
  for (const auto& [key, n] : counts) {
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), n});
  }
  return rows;
}

std::string input_digest(const std::map<std::string, std::string>& files) {
  std::string manifest;
  for (const auto& [path, content] : files) {
    manifest += path;
    manifest.push_back('\0');
    manifest += sha256_hex(content);
    manifest.push_back('\n');
  }
  return sha256_hex(manifest);
}

bool any_at_or_above(const std::vector<Finding>& findings, Severity threshold) {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.severity >= threshold; });
}

json to_json(const Report& r, bool with_timings) {
  json findings = json::array();
  for (const auto& f : r.findings) findings.push_back(to_json(f));
  json rows = json::array();
  for (const auto& row : summarize(r.findings)) {
    rows.push_back({{"class", to_string(row.cls)},
                    {"category", to_string(row.category)},
                    {"severity", to_string(row.severity)},
                    {"count", row.count}});
  }
  json j = {
      {"tool", {{"name", "qa"}, {"version", r.tool_version}}},
      {"input", {{"path", r.input}, {"digest", r.input_digest}}},
      {"complete", r.complete},
      {"incomplete_reasons", r.incomplete_reasons},
      {"findings", std::move(findings)},
      {"summary", {{"total", r.findings.size()}, {"counts", std::move(rows)}}},
  };
  if (with_timings) {
    json t = json::array();
    for (const auto& s : r.timings) t.push_back({{"stage", s.stage}, {"milliseconds", s.milliseconds}});
    j["timings"] = std::move(t);
  }
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.tool_version = j.at("tool").at("version").get<std::string>();
  r.input = j.at("input").at("path").get<std::string>();
  r.input_digest = j.at("input").at("digest").get<std::string>();
  r.complete = j.at("complete").get<bool>();
  r.incomplete_reasons = j.at("incomplete_reasons").get<std::vector<std::string>>();
  for (const auto& f : j.at("findings")) r.findings.push_back(finding_from_json(f));
  if (j.contains("timings")) {
    for (const auto& t : j.at("timings")) {
      r.timings.push_back({t.at("stage").get<std::string>(), t.at("milliseconds").get<double>()});
    }
  }
  return r;
}

namespace {

std::string_view sarif_level(Severity s) {
  switch (s) {
    case Severity::Error:
    case Severity::High: return "error";
    case Severity::Medium: return "warning";
    case Severity::Low:
    case Severity::Info: return "note";
  }
  return "none";
}

// Percent-encodes everything outside RFC 3986 unreserved characters and '/'.
std::string uri_path(std::string_view path) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : path) {
    bool keep = std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~' || c == '/';
    if (keep) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

}  // namespace

json to_sarif(const Report& r, const Catalog& catalog) {
  std::set<std::string> ids;
  for (const auto& f : r.findings) ids.insert(f.rule_id);
  json rules = json::array();
  std::map<std::string, std::size_t> index;
  for (const auto& id : ids) {
    index[id] = rules.size();
    json rule = {{"id", id}};
    if (const DefectEntry* e = catalog.find(id)) {
      rule["name"] = e->title;
      rule["shortDescription"] = {{"text", e->title}};
      if (!e->description.empty()) rule["fullDescription"] = {{"text", e->description}};
      rule["defaultConfiguration"] = {{"level", sarif_level(e->severity)}};
      rule["properties"] = {{"class", to_string(e->cls)},
                            {"category", to_string(e->category)},
                            {"severity", to_string(e->severity)}};
    }
    rules.push_back(std::move(rule));
  }

  json results = json::array();
  for (const auto& f : r.findings) {
    json res = {
        {"ruleId", f.rule_id},
        {"ruleIndex", index.at(f.rule_id)},
        {"level", sarif_level(f.severity)},
        {"message", {{"text", f.message}}},
        {"properties", {{"subject", f.subject}, {"severity", to_string(f.severity)}, {"data", f.data}}},
    };
    if (!f.span.file.empty()) {
      json region = {{"startLine", f.span.start_line},
                     {"startColumn", f.span.start_col},
                     {"byteOffset", f.span.start_byte},
                     {"byteLength", f.span.end_byte - f.span.start_byte}};
      res["locations"] = json::array({{{"physicalLocation",
                                        {{"artifactLocation", {{"uri", uri_path(f.span.file)}}},
                                         {"region", std::move(region)}}}}});
    }
    results.push_back(std::move(res));
  }

  json invocation = {{"executionSuccessful", true}};
  if (!r.complete) {
    json notes = json::array();
    for (const auto& reason : r.incomplete_reasons) {
      notes.push_back({{"level", "error"}, {"message", {{"text", "analysis incomplete: " + reason}}}});
    }
    invocation["toolExecutionNotifications"] = std::move(notes);
  }

  json run = {
      {"tool",
       {{"driver",
         {{"name", "qa"},
          {"version", r.tool_version},
          {"semanticVersion", r.tool_version},
          {"rules", std::move(rules)}}}}},
      {"invocations", json::array({std::move(invocation)})},
      {"results", std::move(results)},
      {"properties", {{"complete", r.complete}, {"inputDigest", r.input_digest}}},
  };
  return {{"$schema", "https://json.schemastore.org/sarif-2.1.0.json"},
          {"version", "2.1.0"},
          {"runs", json::array({std::move(run)})}};
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  for (const auto& f : r.findings) {
    std::string where = f.span.file.empty() ? r.input : f.span.file;
    if (!f.span.file.empty()) where += ":" + std::to_string(f.span.start_line) + ":" + std::to_string(f.span.start_col);
    out << where << ": " << to_string(f.severity) << " [" << f.rule_id << "] " << f.message << '\n';
  }
  for (const auto& reason : r.incomplete_reasons) out << "analysis incomplete: " << reason << '\n';
  std::map<Severity, std::size_t> by_sev;
  for (const auto& f : r.findings) ++by_sev[f.severity];
  out << r.findings.size() << " finding(s)";
  if (!by_sev.empty()) {
    out << ":";
    bool first = true;
    for (auto it = by_sev.rbegin(); it != by_sev.rend(); ++it) {
      out << (first ? " " : ", ") << it->second << ' ' << to_string(it->first);
      first = false;
    }
  }
  out << '\n';
  if (!r.timings.empty()) {
    for (const auto& t : r.timings) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", t.milliseconds);
      out << "  " << t.stage << ": " << buf << " ms\n";
    }
  }
  return out.str();
}

std::string render(const Report& r, ReportFormat format, const Catalog& catalog, bool with_timings) {
  switch (format) {
    case ReportFormat::Json: return to_json(r, with_timings).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
    case ReportFormat::Sarif: return to_sarif(r, catalog).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
    case ReportFormat::Text: {
      if (with_timings) return render_text(r);
      Report copy = r;
      copy.timings.clear();
      return render_text(copy);
    }
  }
  return {};
}

}  // namespace dqa
