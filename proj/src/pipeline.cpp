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


#include "budgetctx/pipeline.hpp"

#include "budgetctx/error.hpp"

namespace budgetctx {

std::int64_t PreparedDocument::total_cost() const {
  std::int64_t total = 0;
  for (const auto& u : units) total += u.token_cost;
  return total;
}

std::vector<Unit> unitize(const Document& doc, const TokenCounter& counter,
                          const UnitizeOptions& options, const Embedder& embedder) {
  switch (options.unitization) {
    case Unitization::kSentence:
      return unitize_sentences(doc, counter);
    case Unitization::kSection:
      return unitize_sections(doc, counter);
    case Unitization::kWindow:
      return unitize_windows(doc, counter, options.window);
    case Unitization::kCluster: {
      const auto sentences = unitize_sentences(doc, counter);
      const FeatureSet f = build_features(sentences, embedder, doc.query);
      return unitize_clusters(doc, counter, f, options.cluster);
    }
  }
  throw ValidationError("unknown unitization");
}

PreparedDocument prepare_document(const Document& doc,
                                  const TokenCounter& counter,
                                  const UnitizeOptions& options,
                                  const Embedder& embedder) {
  PreparedDocument p;
  p.units = unitize(doc, counter, options, embedder);
  p.features = build_features(p.units, embedder, doc.query);
  return p;
}

SelectionResult select_context(const PreparedDocument& prepared, Method method,
                               std::int64_t budget, const SelectorParams& params,
                               std::uint64_t seed) {
  return select(method, prepared.problem(budget, seed), params);
}

}  // namespace budgetctx
