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

#ifndef BUDGETCTX_SELECTION_HPP_
#define BUDGETCTX_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "budgetctx/features.hpp"
#include "budgetctx/text_units.hpp"

namespace budgetctx {

enum class Method {
  kLead,
  kShuffled,
  kSliding,
  kHierarchical,
  kGraphCluster,
  kMmr,
  kRcd,
};

inline constexpr Method kAllMethods[] = {
    Method::kLead,         Method::kShuffled, Method::kSliding,
    Method::kHierarchical, Method::kGraphCluster, Method::kMmr,
    Method::kRcd,
};

std::string_view to_string(Method m);
// Throws ValidationError on unknown names.
Method parse_method(std::string_view name);

// One knapsack instance: pick units whose total token_cost <= budget.
// Borrows units and features; both must outlive the problem.
struct SelectionProblem {
  std::span<const Unit> units;
  const FeatureSet* features = nullptr;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return units.size(); }
  std::int64_t cost(std::size_t i) const { return units[i].token_cost; }
  double relevance(std::size_t i) const { return features->relevance[i]; }
  double similarity(std::size_t i, std::size_t j) const {
    return features->kernel(i, j);
  }
};

// Throws ShapeMismatchError when features are not sized to units.
void validate(const SelectionProblem& problem);

struct SelectionResult {
  std::vector<std::size_t> selected;  // strictly increasing
  std::int64_t total_cost = 0;
  std::optional<double> objective_value;
  Method method = Method::kLead;
  std::string context_text;
};

// Selected unit texts in document order, joined by single spaces.
std::string concat_units(std::span<const Unit> units,
                         std::span<const std::size_t> selected);

// Sorts `selected`, fills total_cost and context_text.
SelectionResult finish_selection(const SelectionProblem& problem, Method method,
                                 std::vector<std::size_t> selected,
                                 std::optional<double> objective = std::nullopt);

}  // namespace budgetctx

#endif  // BUDGETCTX_SELECTION_HPP_
