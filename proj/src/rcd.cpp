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

#include "budgetctx/rcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "budgetctx/error.hpp"
#include "budgetctx/kernels.hpp"

namespace budgetctx {
namespace {

struct HeapEntry {
  double ratio;
  std::size_t index;
  std::size_t version;  // |S| when `ratio` was computed
};

// Max-heap on ratio; lowest index first among equal ratios.
struct HeapOrder {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.index > b.index;
  }
};

// Replaces a greedy set by the best feasible singleton when the singleton
// has a strictly larger objective value.
SelectionResult finish_with_singleton(const SelectionProblem& problem,
                                      const RcdWeights& weights,
                                      std::vector<std::size_t> greedy,
                                      std::span<const double> singleton_values) {
  double value = rcd_objective(greedy, *problem.features, weights);
  bool found = false;
  std::size_t best = 0;
  for (std::size_t e = 0; e < problem.size(); ++e) {
    if (problem.cost(e) > problem.budget) continue;
    if (!found || singleton_values[e] > singleton_values[best]) {
      found = true;
      best = e;
    }
  }
  if (found) {
    const std::size_t single[] = {best};
    const double single_value = rcd_objective(single, *problem.features, weights);
    if (single_value > value) {
      greedy = {best};
      value = single_value;
    }
  }
  return finish_selection(problem, Method::kRcd, std::move(greedy), value);
}

}  // namespace

RcdWeights::RcdWeights(double alpha, double beta, double gamma, double eta) {
  for (double w : {alpha, beta, gamma}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("RCD weights must be finite and nonnegative");
    }
  }
  const double sum = alpha + beta + gamma;
  if (!(sum > 0.0)) throw ValidationError("RCD weights must not all be zero");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw ValidationError("RCD eta must be positive");
  }
  alpha_ = alpha / sum;
  beta_ = beta / sum;
  gamma_ = gamma / sum;
  eta_ = eta;
}

LogDetState::LogDetState(const Matrix& kernel, double eta)
    : kernel_(&kernel), eta_(eta) {}

double LogDetState::border(std::size_t e, std::vector<double>& y) const {
  const auto& k = *kernel_;
  const auto ei = static_cast<Eigen::Index>(e);
  const std::size_t m = members_.size();
  y.resize(m);
  double norm2 = 0.0;
  std::size_t row = 0;  // offset of row r in the packed factor
  for (std::size_t r = 0; r < m; ++r) {
    double s = eta_ * k(static_cast<Eigen::Index>(members_[r]), ei);
    for (std::size_t c = 0; c < r; ++c) s -= factor_[row + c] * y[c];
    y[r] = s / factor_[row + r];
    norm2 += y[r] * y[r];
    row += r + 1;
  }
  return 1.0 + eta_ * k(ei, ei) - norm2;
}

double LogDetState::gain(std::size_t e) const {
  std::vector<double> y;
  const double pivot2 = border(e, y);
  if (!(pivot2 > 0.0)) {
    throw NumericalBreakdownError(
        "log-det update: non-positive pivot " + std::to_string(pivot2) +
        " for unit " + std::to_string(e) + "; kernel is not PSD");
  }
  return std::log(pivot2);
}

void LogDetState::add(std::size_t e) {
  std::vector<double> y;
  const double pivot2 = border(e, y);
  if (!(pivot2 > 0.0)) {
    throw NumericalBreakdownError(
        "log-det update: non-positive pivot " + std::to_string(pivot2) +
        " for unit " + std::to_string(e) + "; kernel is not PSD");
  }
  factor_.insert(factor_.end(), y.begin(), y.end());
  factor_.push_back(std::sqrt(pivot2));
  members_.push_back(e);
  logdet_ += std::log(pivot2);
}

RcdState::RcdState(const FeatureSet& features, const RcdWeights& weights)
    : features_(&features),
      weights_(weights),
      best_(features.size(), 0.0),
      logdet_(features.kernel, weights.eta()) {}

double RcdState::gain(std::size_t e) const {
  double g = weights_.alpha() * features_->relevance[static_cast<Eigen::Index>(e)];
  if (weights_.beta() > 0.0) {
    g += weights_.beta() * kernels::coverage_gain(features_->kernel, best_, e);
  }
  if (weights_.gamma() > 0.0) g += weights_.gamma() * logdet_.gain(e);
  return g;
}

void RcdState::add(std::size_t e) {
  value_ += gain(e);
  kernels::raise_best(features_->kernel, e, best_);
  if (weights_.gamma() > 0.0) {
    logdet_.add(e);
  }
}

double rcd_objective(std::span<const std::size_t> selected,
                     const FeatureSet& features, const RcdWeights& weights) {
  if (selected.empty()) return 0.0;
  const auto& k = features.kernel;
  double relevance = 0.0;
  for (std::size_t i : selected) {
    relevance += features.relevance[static_cast<Eigen::Index>(i)];
  }

  double coverage = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j : selected) {
      best = std::max(best, k(i, static_cast<Eigen::Index>(j)));
    }
    coverage += best;
  }

  const auto m = static_cast<Eigen::Index>(selected.size());
  Matrix sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      sub(a, b) = weights.eta() * k(static_cast<Eigen::Index>(selected[a]),
                                    static_cast<Eigen::Index>(selected[b]));
    }
    sub(a, a) += 1.0;
  }
  Eigen::LLT<Matrix> llt(sub);
  if (llt.info() != Eigen::Success) {
    throw NumericalBreakdownError("I + eta K_S is not positive definite");
  }
  const double logdet =
      2.0 * llt.matrixLLT().diagonal().array().log().sum();

  return weights.alpha() * relevance + weights.beta() * coverage +
         weights.gamma() * logdet;
}

SelectionResult select_rcd(const SelectionProblem& problem,
                           const RcdWeights& weights) {
  validate(problem);
  const std::size_t n = problem.size();
  RcdState state(*problem.features, weights);

  std::vector<double> singleton(n, 0.0);
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapOrder> heap;
  for (std::size_t e = 0; e < n; ++e) {
    if (problem.cost(e) > problem.budget) continue;
    singleton[e] = state.gain(e);
    heap.push({singleton[e] / static_cast<double>(problem.cost(e)), e, 0});
  }

  std::vector<std::size_t> selected;
  std::int64_t remaining = problem.budget;
  while (!heap.empty()) {
    const HeapEntry top = heap.top();
    heap.pop();
    const std::int64_t cost = problem.cost(top.index);
    if (cost > remaining) continue;  // remaining only shrinks
    if (top.version == selected.size()) {
      state.add(top.index);
      selected.push_back(top.index);
      remaining -= cost;
      continue;
    }
    heap.push({state.gain(top.index) / static_cast<double>(cost), top.index,
               selected.size()});
  }
  return finish_with_singleton(problem, weights, std::move(selected), singleton);
}

SelectionResult select_rcd_reference(const SelectionProblem& problem,
                                     const RcdWeights& weights) {
  validate(problem);
  const std::size_t n = problem.size();
  RcdState state(*problem.features, weights);

  std::vector<double> singleton(n, 0.0);
  for (std::size_t e = 0; e < n; ++e) {
    if (problem.cost(e) <= problem.budget) singleton[e] = state.gain(e);
  }

  std::vector<bool> taken(n, false);
  std::vector<std::size_t> selected;
  std::int64_t remaining = problem.budget;
  while (true) {
    bool found = false;
    std::size_t best = 0;
    double best_ratio = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      if (taken[e] || problem.cost(e) > remaining) continue;
      const double ratio = state.gain(e) / static_cast<double>(problem.cost(e));
      if (!found || ratio > best_ratio) {
        found = true;
        best = e;
        best_ratio = ratio;
      }
    }
    if (!found) break;
    state.add(best);
    taken[best] = true;
    selected.push_back(best);
    remaining -= problem.cost(best);
  }
  return finish_with_singleton(problem, weights, std::move(selected), singleton);
}

}  // namespace budgetctx
