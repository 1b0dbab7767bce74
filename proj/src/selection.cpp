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

#include "budgetctx/selection.hpp"

#include <algorithm>
#include <string>

#include "budgetctx/error.hpp"

namespace budgetctx {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kLead:
      return "lead";
    case Method::kShuffled:
      return "shuffled";
    case Method::kSliding:
      return "sliding";
    case Method::kHierarchical:
      return "hierarchical";
    case Method::kGraphCluster:
      return "graph_cluster";
    case Method::kMmr:
      return "mmr";
    case Method::kRcd:
      return "rcd";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : kAllMethods) {
    if (name == to_string(m)) return m;
  }
  throw ValidationError("unknown method '" + std::string(name) +
                        "' (expected lead, shuffled, sliding, hierarchical, "
                        "graph_cluster, mmr or rcd)");
}

void validate(const SelectionProblem& problem) {
  if (problem.features == nullptr) {
    throw ValidationError("selection problem has no features");
  }
  const auto n = static_cast<Eigen::Index>(problem.units.size());
  const auto& f = *problem.features;
  if (f.relevance.size() != n || f.kernel.rows() != n || f.kernel.cols() != n) {
    throw ShapeMismatchError(
        "features sized for " + std::to_string(f.relevance.size()) +
        " units (kernel " + std::to_string(f.kernel.rows()) + "x" +
        std::to_string(f.kernel.cols()) + ") but problem has " +
        std::to_string(n));
  }
  if (problem.budget < 0) throw ValidationError("budget must be nonnegative");
}

std::string concat_units(std::span<const Unit> units,
                         std::span<const std::size_t> selected) {
  std::string out;
  for (std::size_t i : selected) {
    if (!out.empty()) out.push_back(' ');
    out += units[i].text;
  }
  return out;
}

SelectionResult finish_selection(const SelectionProblem& problem, Method method,
                                 std::vector<std::size_t> selected,
                                 std::optional<double> objective) {
  std::sort(selected.begin(), selected.end());
  SelectionResult r;
  r.method = method;
  r.objective_value = objective;
  for (std::size_t i : selected) r.total_cost += problem.cost(i);
  r.context_text = concat_units(problem.units, selected);
  r.selected = std::move(selected);
  return r;
}

}  // namespace budgetctx
