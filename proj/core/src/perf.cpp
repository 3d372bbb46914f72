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

#include "deployqa/perf.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "deployqa/yaml.hpp"

namespace dqa {

std::string_view to_string(PerfError::Kind kind) {
  switch (kind) {
    case PerfError::Kind::CsvSyntax: return "csv_syntax";
    case PerfError::Kind::EmptyData: return "empty_data";
    case PerfError::Kind::InsufficientData: return "insufficient_data";
    case PerfError::Kind::IllConditioned: return "ill_conditioned";
    case PerfError::Kind::BadDegree: return "bad_degree";
    case PerfError::Kind::NameMismatch: return "name_mismatch";
    case PerfError::Kind::GoalSyntax: return "goal_syntax";
  }
  return "unknown";
}

std::string_view to_string(Comparator c) { return c == Comparator::AtMost ? "<=" : ">="; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> cells(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Mapping coefficients back from the centred basis cancels heavily when the
// data sit far from the origin, so the solve runs in extended precision.
#ifdef __SIZEOF_FLOAT128__
using Real = __float128;
#else
using Real = long double;
#endif

Real magnitude(Real v) { return v < 0 ? -v : v; }

Real power(Real base, std::size_t e) {
  Real r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}
using Matrix = std::vector<std::vector<Real>>;

// Solves a x = b by Gaussian elimination with partial pivoting.
std::vector<Real> solve(Matrix a, std::vector<Real> b) {
  const std::size_t m = b.size();
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (magnitude(a[r][col]) > magnitude(a[piv][col])) piv = r;
    }
    if (magnitude(a[piv][col]) < static_cast<Real>(1e-12)) {
      throw PerfError(PerfError::Kind::IllConditioned,
                      "design matrix is singular after normalization (collinear or repeated predictor values)");
    }
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      Real f = a[r][col] / a[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<Real> x(m);
  for (std::size_t i = m; i-- > 0;) {
    Real s = b[i];
    for (std::size_t c = i + 1; c < m; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

Real binomial(std::size_t n, std::size_t k) {
  Real r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<Real>(n - k + i) / static_cast<Real>(i);
  return r;
}

}  // namespace

SampleSet ingest_benchmark(std::string_view csv) {
  SampleSet s;
  bool header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    auto nl = csv.find('\n', pos);
    std::string_view line = trim(csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    pos = nl == std::string_view::npos ? csv.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!header) {
        std::string_view body = trim(line.substr(1));
        if (body.substr(0, 7) == "source:") s.source = std::string(trim(body.substr(7)));
        continue;
      }
      continue;
    }
    auto cs = cells(line);
    if (cs.size() != 2 || cs[0].empty() || cs[1].empty()) {
      throw PerfError(PerfError::Kind::CsvSyntax,
                      "row " + std::to_string(line_no) + ": expected two comma-separated columns", line_no);
    }
    if (!header) {
      s.predictor_name = std::string(cs[0]);
      s.response_name = std::string(cs[1]);
      header = true;
      continue;
    }
    auto x = number(cs[0]);
    auto y = number(cs[1]);
    if (!x || !y) {
      throw PerfError(PerfError::Kind::CsvSyntax,
                      "row " + std::to_string(line_no) + ": '" + std::string(!x ? cs[0] : cs[1]) +
                          "' is not a finite number",
                      line_no);
    }
    s.points.push_back({*x, *y});
  }
  if (s.points.empty()) throw PerfError(PerfError::Kind::EmptyData, "benchmark data has no rows");
  return s;
}

PerfModel fit_ols(const SampleSet& samples, std::size_t degree) {
  if (degree > kMaxDegree) {
    throw PerfError(PerfError::Kind::BadDegree,
                    "degree " + std::to_string(degree) + " exceeds the maximum of " + std::to_string(kMaxDegree));
  }
  const std::size_t n = samples.points.size();
  if (degree + 1 > n) {
    throw PerfError(PerfError::Kind::InsufficientData,
                    "degree " + std::to_string(degree) + " needs at least " + std::to_string(degree + 1) +
                        " points, got " + std::to_string(n));
  }
  const std::size_t m = degree + 1;

  // Centre and scale the predictor so the normal equations stay well conditioned.
  Real mean = 0;
  for (const auto& p : samples.points) mean += static_cast<Real>(p.x);
  mean /= static_cast<Real>(n);
  Real scale = 0;
  for (const auto& p : samples.points) scale = std::max(scale, magnitude(static_cast<Real>(p.x) - mean));
  if (scale == 0) scale = 1;

  Matrix a(m, std::vector<Real>(m, 0));
  std::vector<Real> b(m, 0);
  std::vector<Real> powers(2 * m - 1);
  for (const auto& p : samples.points) {
    Real z = (static_cast<Real>(p.x) - mean) / scale;
    powers[0] = 1;
    for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * z;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) a[i][j] += powers[i + j];
      b[i] += powers[i] * static_cast<Real>(p.y);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] /= static_cast<Real>(n);
    b[i] /= static_cast<Real>(n);
  }
  std::vector<Real> gamma = solve(a, b);
  // One step of iterative refinement against the same system.
  std::vector<Real> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    r[i] = b[i];
    for (std::size_t j = 0; j < m; ++j) r[i] -= a[i][j] * gamma[j];
  }
  auto delta = solve(a, r);
  for (std::size_t i = 0; i < m; ++i) gamma[i] += delta[i];

  // Expand sum_j gamma_j ((x - mean) / scale)^j into powers of x.
  std::vector<Real> beta(m, 0);
  Real inv_pow = 1;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k <= j; ++k) {
      beta[k] += gamma[j] * inv_pow * binomial(j, k) * power(-mean, j - k);
    }
    inv_pow /= scale;
  }

  PerfModel model;
  model.degree = degree;
  model.n = n;
  model.predictor_name = samples.predictor_name;
  model.response_name = samples.response_name;
  for (auto v : beta) model.coefficients.push_back(static_cast<double>(v));
  Real sse = 0;
  for (const auto& p : samples.points) {
    Real z = (static_cast<Real>(p.x) - mean) / scale;
    Real fit = 0;
    for (std::size_t j = m; j-- > 0;) fit = fit * z + gamma[j];
    Real r = static_cast<Real>(p.y) - fit;
    sse += r * r;
  }
  model.rmse = std::sqrt(static_cast<double>(sse / static_cast<Real>(n)));
  return model;
}

double predict(const PerfModel& model, double x) {
  long double acc = 0;
  for (auto it = model.coefficients.rbegin(); it != model.coefficients.rend(); ++it) acc = acc * x + *it;
  return static_cast<double>(acc);
}

Verdict check_goal(const PerfModel& model, const PerfGoal& goal) {
  if (goal.response_name != model.response_name) {
    throw PerfError(PerfError::Kind::NameMismatch, "goal is about '" + goal.response_name +
                                                       "' but the model predicts '" + model.response_name + "'");
  }
  Verdict v;
  v.predicted = predict(model, goal.at);
  v.margin = goal.comparator == Comparator::AtMost ? goal.threshold - v.predicted : v.predicted - goal.threshold;
  v.satisfied = v.margin >= 0;
  v.rmse = model.rmse;
  return v;
}

std::vector<GoalSpec> parse_goals(std::string_view text, const std::string& file) {
  yaml::Document doc;
  try {
    doc = yaml::parse(text, file);
  } catch (const yaml::ParseError& e) {
    throw PerfError(PerfError::Kind::GoalSyntax, e.what(), e.at().line);
  }
  auto fail = [&](const yaml::Node& at, const std::string& msg) {
    return PerfError(PerfError::Kind::GoalSyntax, file + ":" + std::to_string(at.range.start.line) + ": " + msg,
                     at.range.start.line);
  };
  std::vector<GoalSpec> out;
  if (doc.root.is_null()) return out;
  if (!doc.root.is_seq()) throw fail(doc.root, "expected a list of goals");
  for (std::size_t i = 0; i < doc.root.size(); ++i) {
    const yaml::Node& g = doc.root.item(i);
    if (!g.is_map()) throw fail(g, "a goal must be a mapping");
    auto scalar = [&](const char* key) -> const yaml::Node& {
      const yaml::Node* v = g.find(key);
      if (!v || !v->is_scalar() || v->is_null()) throw fail(g, std::string("goal needs '") + key + "'");
      return *v;
    };
    auto real = [&](const char* key) {
      const yaml::Node& v = scalar(key);
      auto d = v.as_float();
      if (!d || !std::isfinite(*d)) throw fail(v, std::string("'") + key + "' must be a finite number");
      return *d;
    };
    GoalSpec spec;
    spec.goal.response_name = scalar("response").text;
    const std::string& cmp = scalar("comparator").text;
    if (cmp == "<=" || cmp == "≤") {
      spec.goal.comparator = Comparator::AtMost;
    } else if (cmp == ">=" || cmp == "≥") {
      spec.goal.comparator = Comparator::AtLeast;
    } else {
      throw fail(*g.find("comparator"), "comparator must be <= or >=");
    }
    spec.goal.threshold = real("threshold");
    spec.goal.at = real("at");
    spec.data = scalar("data").text;
    if (const yaml::Node* d = g.find("degree")) {
      auto v = d->as_int();
      if (!v || *v < 0 || static_cast<std::size_t>(*v) > kMaxDegree) {
        throw fail(*d, "degree must be an integer between 0 and " + std::to_string(kMaxDegree));
      }
      spec.degree = static_cast<std::size_t>(*v);
    }
    spec.span = SourceSpan::of(file, g.range);
    spec.pointer = yaml::pointer_append("", i);
    out.push_back(std::move(spec));
  }
  return out;
}

Finding goal_finding(const Catalog& catalog, const GoalSpec& spec, const Verdict& verdict) {
  std::ostringstream msg;
  msg.precision(6);
  msg << "predicted " << spec.goal.response_name << " " << verdict.predicted << " at " << spec.goal.at
      << " misses goal " << to_string(spec.goal.comparator) << " " << spec.goal.threshold;
  nlohmann::json data = {{"response", spec.goal.response_name},
                         {"comparator", std::string(to_string(spec.goal.comparator))},
                         {"threshold", spec.goal.threshold},
                         {"at", spec.goal.at},
                         {"predicted", verdict.predicted},
                         {"margin", verdict.margin},
                         {"rmse", verdict.rmse}};
  return make_finding(catalog, "P001", msg.str(), spec.span, spec.pointer, std::move(data));
}

}  // namespace dqa
