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

// Overlap metrics and the token price model.
//
// Texts are normalized by lowercasing and replacing punctuation with
// whitespace; there is no stemming. N-gram overlap uses clipped counts.

#ifndef BUDGETCTX_METRICS_HPP_
#define BUDGETCTX_METRICS_HPP_

#include <cstdint>
#include <string_view>

#include "budgetctx/features.hpp"

namespace budgetctx {

struct ScorePair {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Harmonic mean, 0 when both are 0.
ScorePair make_score(double precision, double recall);

ScorePair rouge_n(std::string_view candidate, std::string_view reference,
                  int n);
ScorePair rouge1(std::string_view candidate, std::string_view reference);
ScorePair rouge2(std::string_view candidate, std::string_view reference);
// Unigram F1 over the same normalized multisets as rouge1.
ScorePair token_f1(std::string_view candidate, std::string_view reference);

// Greedy max-cosine matching over per-token embeddings (BERTScore-style
// without IDF weighting or baseline rescaling).
ScorePair soft_embed_f1(std::string_view candidate, std::string_view reference,
                        const Embedder& embedder);

struct PriceSchedule {
  double input_price_per_million = 0.0;
  double output_price_per_million = 0.0;
};

// (p_in * input_tokens + p_out * output_tokens) / 1e6.
double estimate_cost(std::int64_t input_tokens, std::int64_t output_tokens,
                     const PriceSchedule& prices);

}  // namespace budgetctx

#endif  // BUDGETCTX_METRICS_HPP_
