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


#include "budgetctx/metrics.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "budgetctx/error.hpp"
#include "budgetctx/text.hpp"

namespace budgetctx {
namespace {

std::map<std::string, std::int64_t> ngram_counts(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::string, std::int64_t> counts;
  const auto len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < len; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

std::int64_t total(const std::map<std::string, std::int64_t>& counts) {
  std::int64_t t = 0;
  for (const auto& [k, c] : counts) t += c;
  return t;
}

// Mean over rows of `from` of the best cosine against any row of `to`.
double mean_best_cosine(const Matrix& from, const Matrix& to) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < from.rows(); ++i) {
    sum += (to * from.row(i).transpose()).maxCoeff();
  }
  return sum / static_cast<double>(from.rows());
}

void normalize_rows(Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > 0.0) m.row(i) /= norm;
  }
}

}  // namespace

ScorePair make_score(double precision, double recall) {
  const double denom = precision + recall;
  return {precision, recall, denom > 0.0 ? 2.0 * precision * recall / denom : 0.0};
}

ScorePair rouge_n(std::string_view candidate, std::string_view reference, int n) {
  if (n < 1) throw ValidationError("rouge_n: n must be >= 1");
  const auto cand = ngram_counts(normalize_tokens(candidate), n);
  const auto ref = ngram_counts(normalize_tokens(reference), n);
  const std::int64_t cand_total = total(cand);
  const std::int64_t ref_total = total(ref);
  if (cand_total == 0 || ref_total == 0) return {};
  std::int64_t overlap = 0;
  for (const auto& [gram, c] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(c, it->second);
  }
  return make_score(static_cast<double>(overlap) / static_cast<double>(cand_total),
                    static_cast<double>(overlap) / static_cast<double>(ref_total));
}

ScorePair rouge1(std::string_view candidate, std::string_view reference) {
  return rouge_n(candidate, reference, 1);
}

ScorePair rouge2(std::string_view candidate, std::string_view reference) {
  return rouge_n(candidate, reference, 2);
}

ScorePair token_f1(std::string_view candidate, std::string_view reference) {
  return rouge1(candidate, reference);
}

ScorePair soft_embed_f1(std::string_view candidate, std::string_view reference,
                        const Embedder& embedder) {
  const auto cand = normalize_tokens(candidate);
  const auto ref = normalize_tokens(reference);
  if (cand.empty() || ref.empty()) return {};
  std::vector<std::string> texts(cand);
  texts.insert(texts.end(), ref.begin(), ref.end());
  Matrix all = embedder.embed(texts);
  if (static_cast<std::size_t>(all.rows()) != texts.size()) {
    throw ShapeMismatchError("embedder returned " + std::to_string(all.rows()) +
                             " rows for " + std::to_string(texts.size()) +
                             " tokens");
  }
  normalize_rows(all);
  const auto nc = static_cast<Eigen::Index>(cand.size());
  const Matrix c = all.topRows(nc);
  const Matrix r = all.bottomRows(all.rows() - nc);
  return make_score(mean_best_cosine(c, r), mean_best_cosine(r, c));
}

double estimate_cost(std::int64_t input_tokens, std::int64_t output_tokens,
                     const PriceSchedule& prices) {
  if (input_tokens < 0 || output_tokens < 0) {
    throw ValidationError("token counts must be nonnegative");
  }
  if (prices.input_price_per_million < 0.0 || prices.output_price_per_million < 0.0) {
    throw ValidationError("prices must be nonnegative");
  }
  return (prices.input_price_per_million * static_cast<double>(input_tokens) +
          prices.output_price_per_million * static_cast<double>(output_tokens)) /
         1e6;
}

}  // namespace budgetctx
