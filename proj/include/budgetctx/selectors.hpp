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

// Budget-feasible selectors. Every selector returns total_cost <= budget and
// breaks ties toward the lowest unit index. An empty selection is legal.

#ifndef BUDGETCTX_SELECTORS_HPP_
#define BUDGETCTX_SELECTORS_HPP_

#include <cstddef>

#include "budgetctx/rcd.hpp"
#include "budgetctx/selection.hpp"

namespace budgetctx {

struct MmrParams {
  double lambda = 0.7;
};

struct SelectorParams {
  MmrParams mmr;
  RcdWeights rcd;
  double edge_threshold = 0.5;
  std::size_t max_anchors = 5;
};

// Document order with skip-and-continue: units that no longer fit are
// passed over and later, smaller units may still be taken.
SelectionResult select_lead(const SelectionProblem& problem);

// Lead rule over a seeded uniform permutation of the units.
SelectionResult select_shuffled(const SelectionProblem& problem);

// Contiguous range with maximal total relevance under the budget.
SelectionResult select_sliding(const SelectionProblem& problem);

// Anchors by descending relevance (at most max_anchors), then grow by the
// best-relevance unselected neighbor of the current selection.
SelectionResult select_hierarchical(const SelectionProblem& problem,
                                    std::size_t max_anchors = 5);

// Components of the graph {(i, j) : K(i, j) >= edge_threshold}, visited
// round-robin in descending total relevance; each visit takes the
// component's best remaining unit that fits.
SelectionResult select_graph_cluster(const SelectionProblem& problem,
                                     double edge_threshold = 0.5);

// Throws ValidationError if lambda is outside [0, 1].
SelectionResult select_mmr(const SelectionProblem& problem,
                           const MmrParams& params = {});

SelectionResult select(Method method, const SelectionProblem& problem,
                       const SelectorParams& params = {});

}  // namespace budgetctx

#endif  // BUDGETCTX_SELECTORS_HPP_
