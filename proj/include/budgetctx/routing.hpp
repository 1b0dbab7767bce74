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

// Budget-regime routing: low budgets go to a positional selector, moderate
// budgets to a redundancy-aware one, large budgets to the coverage
// objective. Thresholds are calibrated on a validation sweep.

#ifndef BUDGETCTX_ROUTING_HPP_
#define BUDGETCTX_ROUTING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "budgetctx/features.hpp"
#include "budgetctx/report.hpp"
#include "budgetctx/selection.hpp"

namespace budgetctx {

// Diagnostics reported next to routing decisions; they do not gate it.
struct DocStats {
  double front_loading_index = 0.0;  // share of relevance in the feasible prefix
  double redundancy_index = 0.0;     // mean adjacent-unit similarity
  std::size_t unit_count = 0;
  std::int64_t total_cost = 0;
};

DocStats compute_doc_stats(std::span<const Unit> units,
                           const FeatureSet& features, std::int64_t budget);

// b2 == kUnboundedBudget means the high method is never used.
inline constexpr std::int64_t kUnboundedBudget =
    std::numeric_limits<std::int64_t>::max();

struct RouterPolicy {
  std::int64_t b1 = 512;
  std::int64_t b2 = 1024;
  Method low_method = Method::kLead;
  Method mid_method = Method::kMmr;
  Method high_method = Method::kRcd;

  friend bool operator==(const RouterPolicy&, const RouterPolicy&) = default;
};

// Throws ValidationError unless 0 < b1 < b2.
void validate(const RouterPolicy& policy);

// low if B <= b1, mid if b1 < B <= b2, high otherwise.
Method route(std::int64_t budget, const RouterPolicy& policy);

nlohmann::json policy_to_json(const RouterPolicy& policy);
RouterPolicy policy_from_json(const nlohmann::json& j);
void save_policy(const RouterPolicy& policy, const std::filesystem::path& path);
RouterPolicy load_policy(const std::filesystem::path& path);

// Per-budget mean score of each method in the sweep, restricted to one
// unitization (empty = the only unitization present).
struct MethodCurves {
  std::vector<std::int64_t> budgets;
  std::vector<std::string> methods;
  // scores[b][m]; NaN marks a missing cell.
  std::vector<std::vector<double>> scores;
};

MethodCurves method_curves(const EvalReport& sweep, std::string_view metric,
                           std::string_view unitization = {});

// Exhaustive search over b1 < b2 drawn from `candidate_grid` (b2 may also be
// kUnboundedBudget), maximizing the mean over the sweep's budgets of the
// routed method's mean score. Ties go to the lexicographically
// smallest (b1, b2). Methods come from `methods_template`.
//
// Throws ValidationError for fewer than two grid points and
// IncompleteSweepError listing missing (budget, method) cells.
RouterPolicy calibrate_thresholds(const EvalReport& sweep,
                                  std::span<const std::int64_t> candidate_grid,
                                  std::string_view metric = "rouge1",
                                  const RouterPolicy& methods_template = {},
                                  std::string_view unitization = {});

// Budget-averaged routed score for a policy (the calibration objective).
double routed_objective(const MethodCurves& curves, const RouterPolicy& policy,
                        std::span<const std::int64_t> budgets);

struct OracleBound {
  std::int64_t budget = 0;
  double upper = 0.0;
  double lower = 0.0;
};

// Max / min over methods of the mean score at each budget.
// Throws IncompleteSweepError if any method lacks a budget.
std::vector<OracleBound> oracle_bounds(const EvalReport& sweep,
                                       std::string_view metric = "rouge1",
                                       std::string_view unitization = {});

// Mean score of the routed method at each budget of the sweep.
std::vector<std::pair<std::int64_t, double>> routed_curve(
    const EvalReport& sweep, const RouterPolicy& policy,
    std::string_view metric = "rouge1", std::string_view unitization = {});

}  // namespace budgetctx

#endif  // BUDGETCTX_ROUTING_HPP_
