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

// End-to-end budgeted context selection: unitize, featurize, select,
// concatenate in document order.

#ifndef BUDGETCTX_PIPELINE_HPP_
#define BUDGETCTX_PIPELINE_HPP_

#include <cstdint>
#include <vector>

#include "budgetctx/features.hpp"
#include "budgetctx/selectors.hpp"
#include "budgetctx/text_units.hpp"

namespace budgetctx {

struct UnitizeOptions {
  Unitization unitization = Unitization::kSentence;
  WindowParams window;
  ClusterParams cluster;
};

// Units plus their features for one document. Budget independent, so a
// sweep prepares each (document, unitization) once.
struct PreparedDocument {
  std::vector<Unit> units;
  FeatureSet features;

  std::int64_t total_cost() const;
  SelectionProblem problem(std::int64_t budget, std::uint64_t seed = 0) const {
    return SelectionProblem{units, &features, budget, seed};
  }
};

std::vector<Unit> unitize(const Document& doc, const TokenCounter& counter,
                          const UnitizeOptions& options, const Embedder& embedder);

PreparedDocument prepare_document(const Document& doc,
                                  const TokenCounter& counter,
                                  const UnitizeOptions& options,
                                  const Embedder& embedder);

SelectionResult select_context(const PreparedDocument& prepared, Method method,
                               std::int64_t budget,
                               const SelectorParams& params = {},
                               std::uint64_t seed = 0);

}  // namespace budgetctx

#endif  // BUDGETCTX_PIPELINE_HPP_
