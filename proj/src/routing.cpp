// Copyright 2026 The budgetctx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "budgetctx/routing.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "budgetctx/error.hpp"

namespace budgetctx {
namespace {

constexpr double kTieSlack = 1e-12;

using nlohmann::json;

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string pick_unitization(const EvalReport& sweep, std::string_view requested) {
  if (!requested.empty()) return std::string(requested);
  std::set<std::string> seen;
  for (const auto& r : sweep.rows) seen.insert(r.unitization);
  if (seen.size() > 1) {
    throw ValidationError("sweep mixes unitizations; choose one explicitly");
  }
  return seen.empty() ? std::string() : *seen.begin();
}

std::size_t column_of(const MethodCurves& curves, Method m) {
  const auto it = std::find(curves.methods.begin(), curves.methods.end(), to_string(m));
  return static_cast<std::size_t>(it - curves.methods.begin());
}

double score_at(const MethodCurves& curves, std::size_t b, Method m) {
  const std::size_t col = column_of(curves, m);
  return col < curves.methods.size() ? curves.scores[b][col] : kMissing;
}

void require_cells(const MethodCurves& curves, std::span<const Method> methods) {
  std::string missing;
  for (std::size_t b = 0; b < curves.budgets.size(); ++b) {
    for (Method m : methods) {
      if (std::isnan(score_at(curves, b, m))) {
        if (!missing.empty()) missing += ", ";
        missing += "(" + std::to_string(curves.budgets[b]) + ", " +
                   std::string(to_string(m)) + ")";
      }
    }
  }
  if (curves.budgets.empty()) missing = "no rows";
  if (!missing.empty()) {
    throw IncompleteSweepError("sweep is missing (budget, method) cells: " + missing);
  }
}

}  // namespace

DocStats compute_doc_stats(std::span<const Unit> units, const FeatureSet& features,
                           std::int64_t budget) {
  const std::size_t n = units.size();
  if (features.size() != n) {
    throw ShapeMismatchError("doc stats: features sized for " +
                             std::to_string(features.size()) + " units, got " +
                             std::to_string(n));
  }
  DocStats s;
  s.unit_count = n;
  double prefix = 0.0;
  double mass = 0.0;
  std::int64_t cost = 0;
  bool open = true;  // still inside the feasible prefix
  for (std::size_t i = 0; i < n; ++i) {
    const double r = features.relevance[static_cast<Eigen::Index>(i)];
    s.total_cost += units[i].token_cost;
    mass += r;
    if (open && cost + units[i].token_cost <= budget) {
      cost += units[i].token_cost;
      prefix += r;
    } else {
      open = false;
    }
  }
  s.front_loading_index = mass > 0.0 ? prefix / mass : 0.0;
  if (n > 1) {
    double adj = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      adj += features.kernel(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(i + 1));
    }
    s.redundancy_index = adj / static_cast<double>(n - 1);
  }
  return s;
}

void validate(const RouterPolicy& policy) {
  if (!(policy.b1 > 0 && policy.b1 < policy.b2)) {
    throw ValidationError("router thresholds need 0 < b1 < b2 (got b1=" +
                          std::to_string(policy.b1) +
                          ", b2=" + std::to_string(policy.b2) + ")");
  }
}

Method route(std::int64_t budget, const RouterPolicy& policy) {
  if (budget <= policy.b1) return policy.low_method;
  if (budget <= policy.b2) return policy.mid_method;
  return policy.high_method;
}

json policy_to_json(const RouterPolicy& policy) {
  return {{"b1", policy.b1},
          {"b2", policy.b2 == kUnboundedBudget ? json() : json(policy.b2)},
          {"low_method", to_string(policy.low_method)},
          {"mid_method", to_string(policy.mid_method)},
          {"high_method", to_string(policy.high_method)}};
}

RouterPolicy policy_from_json(const json& j) {
  RouterPolicy p;
  try {
    if (!j.is_object()) throw ParseError("policy is not a JSON object");
    p.b1 = j.at("b1").get<std::int64_t>();
    p.b2 = j.at("b2").is_null() ? kUnboundedBudget : j.at("b2").get<std::int64_t>();
    if (j.contains("low_method")) {
      p.low_method = parse_method(j["low_method"].get<std::string>());
    }
    if (j.contains("mid_method")) {
      p.mid_method = parse_method(j["mid_method"].get<std::string>());
    }
    if (j.contains("high_method")) {
      p.high_method = parse_method(j["high_method"].get<std::string>());
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("policy: ") + e.what());
  }
  validate(p);
  return p;
}

void save_policy(const RouterPolicy& policy, const std::filesystem::path& path) {
  validate(policy);
  write_file_atomic(path, policy_to_json(policy).dump(2) + "\n");
}

RouterPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read policy " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("policy " + path.string() + ": " + e.what());
  }
  return policy_from_json(j);
}

MethodCurves method_curves(const EvalReport& sweep, std::string_view metric,
                           std::string_view unitization) {
  check_metric(metric);
  const std::string unit = pick_unitization(sweep, unitization);
  std::set<std::int64_t> budgets;
  std::set<std::string> methods;
  for (const auto& r : sweep.rows) {
    if (r.unitization != unit) continue;
    budgets.insert(r.budget);
    methods.insert(r.method);
  }
  MethodCurves c;
  c.budgets.assign(budgets.begin(), budgets.end());
  c.methods.assign(methods.begin(), methods.end());
  const auto means = mean_scores(sweep, metric);
  c.scores.assign(c.budgets.size(), std::vector<double>(c.methods.size(), kMissing));
  for (std::size_t b = 0; b < c.budgets.size(); ++b) {
    for (std::size_t m = 0; m < c.methods.size(); ++m) {
      if (auto it = means.find({c.budgets[b], unit, c.methods[m]}); it != means.end()) {
        c.scores[b][m] = it->second;
      }
    }
  }
  return c;
}

double routed_objective(const MethodCurves& curves, const RouterPolicy& policy,
                        std::span<const std::int64_t> budgets) {
  if (budgets.empty()) throw ValidationError("routed_objective: no budgets");
  double sum = 0.0;
  for (std::int64_t budget : budgets) {
    const auto it = std::find(curves.budgets.begin(), curves.budgets.end(), budget);
    if (it == curves.budgets.end()) {
      throw IncompleteSweepError("sweep has no rows at budget " +
                                 std::to_string(budget));
    }
    const auto b = static_cast<std::size_t>(it - curves.budgets.begin());
    const Method m = route(budget, policy);
    const double v = score_at(curves, b, m);
    if (std::isnan(v)) {
      throw IncompleteSweepError("sweep is missing (" + std::to_string(budget) +
                                 ", " + std::string(to_string(m)) + ")");
    }
    sum += v;
  }
  return sum / static_cast<double>(budgets.size());
}

RouterPolicy calibrate_thresholds(const EvalReport& sweep,
                                  std::span<const std::int64_t> candidate_grid,
                                  std::string_view metric,
                                  const RouterPolicy& methods_template,
                                  std::string_view unitization) {
  std::vector<std::int64_t> grid(candidate_grid.begin(), candidate_grid.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 2) {
    throw ValidationError(
        "calibration needs at least two grid points so that b1 < b2");
  }
  if (grid.front() <= 0) throw ValidationError("calibration grid must be positive");

  const MethodCurves curves = method_curves(sweep, metric, unitization);
  const Method used[] = {methods_template.low_method, methods_template.mid_method,
                         methods_template.high_method};
  require_cells(curves, used);

  std::vector<std::int64_t> upper(grid);
  upper.push_back(kUnboundedBudget);

  RouterPolicy best = methods_template;
  double best_score = -std::numeric_limits<double>::infinity();
  bool found = false;
  // Pairs are visited in lexicographic order, so a strict improvement keeps
  // the smallest pair among ties. Cell means reach equal scores through
  // different summation orders, hence the slack.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = i + 1; j < upper.size(); ++j) {
      RouterPolicy p = methods_template;
      p.b1 = grid[i];
      p.b2 = upper[j];
      const double score = routed_objective(curves, p, curves.budgets);
      if (!found || score > best_score + kTieSlack) {
        found = true;
        best = p;
        best_score = score;
      }
    }
  }
  return best;
}

std::vector<OracleBound> oracle_bounds(const EvalReport& sweep,
                                       std::string_view metric,
                                       std::string_view unitization) {
  const MethodCurves curves = method_curves(sweep, metric, unitization);
  if (curves.budgets.empty()) throw IncompleteSweepError("sweep has no rows");
  std::vector<OracleBound> out;
  for (std::size_t b = 0; b < curves.budgets.size(); ++b) {
    OracleBound o;
    o.budget = curves.budgets[b];
    o.upper = -std::numeric_limits<double>::infinity();
    o.lower = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < curves.methods.size(); ++m) {
      const double v = curves.scores[b][m];
      if (std::isnan(v)) {
        throw IncompleteSweepError("sweep is missing (" + std::to_string(o.budget) +
                                   ", " + curves.methods[m] + ")");
      }
      o.upper = std::max(o.upper, v);
      o.lower = std::min(o.lower, v);
    }
    out.push_back(o);
  }
  return out;
}

std::vector<std::pair<std::int64_t, double>> routed_curve(
    const EvalReport& sweep, const RouterPolicy& policy, std::string_view metric,
    std::string_view unitization) {
  const MethodCurves curves = method_curves(sweep, metric, unitization);
  std::vector<std::pair<std::int64_t, double>> out;
  for (std::size_t b = 0; b < curves.budgets.size(); ++b) {
    const std::int64_t budget = curves.budgets[b];
    const Method m = route(budget, policy);
    const double v = score_at(curves, b, m);
    if (std::isnan(v)) {
      throw IncompleteSweepError("sweep is missing (" + std::to_string(budget) +
                                 ", " + std::string(to_string(m)) + ")");
    }
    out.emplace_back(budget, v);
  }
  return out;
}

}  // namespace budgetctx
