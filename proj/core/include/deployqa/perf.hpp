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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "deployqa/catalog.hpp"
#include "deployqa/finding.hpp"

namespace dqa {

class PerfError : public std::runtime_error {
 public:
  enum class Kind { CsvSyntax, EmptyData, InsufficientData, IllConditioned, BadDegree, NameMismatch, GoalSyntax };
  PerfError(Kind kind, const std::string& message, std::size_t row = 0)
      : std::runtime_error(message), kind_(kind), row_(row) {}
  Kind kind() const { return kind_; }
  /// 1-based line of the offending CSV row, 0 when not applicable.
  std::size_t row() const { return row_; }

 private:
  Kind kind_;
  std::size_t row_;
};

std::string_view to_string(PerfError::Kind kind);

struct SamplePoint {
  double x = 0;
  double y = 0;
};

struct SampleSet {
  std::string predictor_name;
  std::string response_name;
  std::vector<SamplePoint> points;
  std::string source;  // benchmark label, e.g. LINPACK
};

struct PerfModel {
  std::size_t degree = 0;
  std::vector<double> coefficients;  // constant term first, original units
  double rmse = 0;
  std::size_t n = 0;
  std::string predictor_name;
  std::string response_name;
};

enum class Comparator { AtMost, AtLeast };

struct PerfGoal {
  std::string response_name;
  Comparator comparator = Comparator::AtMost;
  double threshold = 0;
  double at = 0;
};

struct Verdict {
  bool satisfied = false;
  double predicted = 0;
  double margin = 0;  // positive when the goal holds
  double rmse = 0;
};

constexpr std::size_t kMaxDegree = 4;

/// CSV with a `predictor,response` header and numeric rows. A leading
/// `# source: <label>` comment names the benchmark.
SampleSet ingest_benchmark(std::string_view csv);

PerfModel fit_ols(const SampleSet& samples, std::size_t degree);

double predict(const PerfModel& model, double x);

Verdict check_goal(const PerfModel& model, const PerfGoal& goal);

/// One entry of goals.yaml.
struct GoalSpec {
  PerfGoal goal;
  std::string data;  // CSV path relative to the goals file
  std::size_t degree = 1;
  SourceSpan span;
  std::string pointer;
};

std::vector<GoalSpec> parse_goals(std::string_view text, const std::string& file);

/// P001 finding for a violated goal.
Finding goal_finding(const Catalog& catalog, const GoalSpec& spec, const Verdict& verdict);

std::string_view to_string(Comparator c);

}  // namespace dqa
