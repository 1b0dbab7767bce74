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

#include "budgetctx/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "budgetctx/error.hpp"
#include "budgetctx/kernels.hpp"
#include "budgetctx/random.hpp"

namespace budgetctx {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Take units in the given order, skipping any that no longer fit.
std::vector<std::size_t> pack_in_order(const SelectionProblem& p,
                                       std::span<const std::size_t> order) {
  std::vector<std::size_t> taken;
  std::int64_t remaining = p.budget;
  for (std::size_t i : order) {
    if (p.cost(i) <= remaining) {
      taken.push_back(i);
      remaining -= p.cost(i);
    }
  }
  return taken;
}

// Indices sorted by descending relevance, lowest index first among ties.
std::vector<std::size_t> by_relevance(const SelectionProblem& p,
                                      std::span<const std::size_t> subset) {
  std::vector<std::size_t> order(subset.begin(), subset.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p.relevance(a) > p.relevance(b);
  });
  return order;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

bool better(double score, std::size_t idx, double best_score,
            std::size_t best_idx) {
  return score > best_score || (score == best_score && idx < best_idx);
}

}  // namespace

SelectionResult select_lead(const SelectionProblem& problem) {
  validate(problem);
  const auto order = all_indices(problem.size());
  return finish_selection(problem, Method::kLead, pack_in_order(problem, order));
}

SelectionResult select_shuffled(const SelectionProblem& problem) {
  validate(problem);
  auto order = all_indices(problem.size());
  Rng rng(problem.seed);
  fisher_yates(std::span<std::size_t>(order), rng);
  return finish_selection(problem, Method::kShuffled,
                          pack_in_order(problem, order));
}

SelectionResult select_sliding(const SelectionProblem& problem) {
  validate(problem);
  const std::size_t n = problem.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + problem.relevance(i);
  }

  bool found = false;
  double best_sum = 0.0;
  std::size_t best_i = 0;
  std::size_t best_j = 0;
  std::size_t j = 0;
  std::int64_t cost = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) {
      j = i;
      cost = 0;
    }
    while (j < n && cost + problem.cost(j) <= problem.budget) {
      cost += problem.cost(j);
      ++j;
    }
    if (j > i) {
      // Relevance is nonnegative, so the longest feasible window at i is
      // the best one starting at i. Earlier windows win near-ties.
      const double sum = prefix[j] - prefix[i];
      const double slack = 1e-12 * std::max(1.0, std::abs(best_sum));
      if (!found || sum > best_sum + slack) {
        found = true;
        best_sum = sum;
        best_i = i;
        best_j = j;
      }
      cost -= problem.cost(i);
    }
  }

  std::vector<std::size_t> selected;
  for (std::size_t t = best_i; t < best_j; ++t) selected.push_back(t);
  return finish_selection(problem, Method::kSliding, std::move(selected));
}

SelectionResult select_hierarchical(const SelectionProblem& problem,
                                    std::size_t max_anchors) {
  validate(problem);
  if (max_anchors == 0) throw ValidationError("max_anchors must be >= 1");
  const std::size_t n = problem.size();
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> selected;
  std::int64_t remaining = problem.budget;

  auto take = [&](std::size_t i) {
    taken[i] = true;
    selected.push_back(i);
    remaining -= problem.cost(i);
  };

  for (std::size_t i : by_relevance(problem, all_indices(n))) {
    if (selected.size() == max_anchors) break;
    if (problem.cost(i) <= remaining) take(i);
  }

  while (true) {
    bool found = false;
    std::size_t best = 0;
    auto consider = [&](std::size_t c) {
      if (taken[c] || problem.cost(c) > remaining) return;
      if (!found || better(problem.relevance(c), c, problem.relevance(best), best)) {
        found = true;
        best = c;
      }
    };
    for (std::size_t s : selected) {
      if (s > 0) consider(s - 1);
      if (s + 1 < n) consider(s + 1);
    }
    if (!found) break;
    take(best);
  }
  return finish_selection(problem, Method::kHierarchical, std::move(selected));
}

SelectionResult select_graph_cluster(const SelectionProblem& problem,
                                     double edge_threshold) {
  validate(problem);
  const std::size_t n = problem.size();

  std::vector<std::size_t> root(n);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (problem.similarity(i, j) >= edge_threshold) {
        std::size_t a = find(i);
        std::size_t b = find(j);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  struct Component {
    std::vector<std::size_t> members;  // best relevance first
    double total = 0.0;
    std::size_t cursor = 0;
  };
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<Component> comps;
  for (std::size_t r = 0; r < n; ++r) {
    if (groups[r].empty()) continue;
    Component c;
    for (std::size_t i : groups[r]) c.total += problem.relevance(i);
    c.members = by_relevance(problem, groups[r]);
    comps.push_back(std::move(c));
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const Component& a, const Component& b) {
                     return a.total > b.total;
                   });

  std::vector<bool> done(n, false);  // taken, or can never fit again
  std::vector<std::size_t> selected;
  std::int64_t remaining = problem.budget;
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto& c : comps) {
      while (c.cursor < c.members.size() && done[c.members[c.cursor]]) ++c.cursor;
      for (std::size_t k = c.cursor; k < c.members.size(); ++k) {
        const std::size_t i = c.members[k];
        if (done[i]) continue;
        if (problem.cost(i) > remaining) {
          done[i] = true;  // remaining only shrinks
          continue;
        }
        done[i] = true;
        selected.push_back(i);
        remaining -= problem.cost(i);
        progress = true;
        break;
      }
    }
  }
  return finish_selection(problem, Method::kGraphCluster, std::move(selected));
}

SelectionResult select_mmr(const SelectionProblem& problem,
                           const MmrParams& params) {
  validate(problem);
  const double lambda = params.lambda;
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("MMR lambda must lie in [0, 1]");
  }
  const std::size_t n = problem.size();
  const auto& kernel = problem.features->kernel;
  std::vector<double> redundancy(n, kNegInf);
  std::vector<bool> taken(n, false);
  std::vector<std::size_t> selected;
  std::int64_t remaining = problem.budget;

  while (true) {
    bool found = false;
    std::size_t best = 0;
    double best_score = kNegInf;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i] || problem.cost(i) > remaining) continue;
      const double red = selected.empty() ? 0.0 : redundancy[i];
      const double score = lambda * problem.relevance(i) - (1.0 - lambda) * red;
      if (!found || score > best_score) {
        found = true;
        best = i;
        best_score = score;
      }
    }
    if (!found) break;
    taken[best] = true;
    selected.push_back(best);
    remaining -= problem.cost(best);
    kernels::raise_best(kernel, best, redundancy);
  }
  return finish_selection(problem, Method::kMmr, std::move(selected));
}

SelectionResult select(Method method, const SelectionProblem& problem,
                       const SelectorParams& params) {
  switch (method) {
    case Method::kLead:
      return select_lead(problem);
    case Method::kShuffled:
      return select_shuffled(problem);
    case Method::kSliding:
      return select_sliding(problem);
    case Method::kHierarchical:
      return select_hierarchical(problem, params.max_anchors);
    case Method::kGraphCluster:
      return select_graph_cluster(problem, params.edge_threshold);
    case Method::kMmr:
      return select_mmr(problem, params.mmr);
    case Method::kRcd:
      return select_rcd(problem, params.rcd);
  }
  throw ValidationError("unknown method");
}

}  // namespace budgetctx
