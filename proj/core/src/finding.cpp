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

#include "deployqa/finding.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace dqa {

Finding make_finding(const Catalog& catalog, std::string_view rule_id, std::string message,
                     SourceSpan span, std::string subject, nlohmann::json data) {
  const DefectEntry* e = catalog.find(rule_id);
  if (!e) throw UnknownRule(std::string(rule_id));
  Finding f;
  f.rule_id = e->rule_id;
  f.cls = e->cls;
  f.category = e->category;
  f.severity = e->severity;
  f.message = std::move(message);
  f.span = std::move(span);
  f.subject = std::move(subject);
  f.data = std::move(data);
  return f;
}

void sort_and_dedupe(std::vector<Finding>& findings) {
  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.span.file, a.span.start_byte, a.rule_id) <
           std::tie(b.span.file, b.span.start_byte, b.rule_id);
  });
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  std::vector<Finding> out;
  out.reserve(findings.size());
  for (auto& f : findings) {
    if (seen.emplace(f.rule_id, f.span.file, f.subject).second) out.push_back(std::move(f));
  }
  findings = std::move(out);
}

nlohmann::json to_json(const Finding& f) {
  return {
      {"rule_id", f.rule_id},
      {"class", to_string(f.cls)},
      {"category", to_string(f.category)},
      {"severity", to_string(f.severity)},
      {"message", f.message},
      {"subject", f.subject},
      {"location",
       {{"file", f.span.file},
        {"start_byte", f.span.start_byte},
        {"end_byte", f.span.end_byte},
        {"line", f.span.start_line},
        {"column", f.span.start_col}}},
      {"data", f.data},
  };
}

Finding finding_from_json(const nlohmann::json& j) {
  Finding f;
  f.rule_id = j.at("rule_id").get<std::string>();
  f.cls = defect_class_from(j.at("class").get<std::string>()).value();
  f.category = category_from(j.at("category").get<std::string>()).value();
  f.severity = severity_from(j.at("severity").get<std::string>()).value();
  f.message = j.at("message").get<std::string>();
  f.subject = j.at("subject").get<std::string>();
  const auto& loc = j.at("location");
  f.span.file = loc.at("file").get<std::string>();
  f.span.start_byte = loc.at("start_byte").get<std::size_t>();
  f.span.end_byte = loc.at("end_byte").get<std::size_t>();
  f.span.start_line = loc.at("line").get<std::size_t>();
  f.span.start_col = loc.at("column").get<std::size_t>();
  f.data = j.value("data", nlohmann::json::object());
  return f;
}

}  // namespace dqa
