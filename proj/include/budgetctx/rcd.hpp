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

// Relevance / coverage / diversity objective
//
//   F(S) = alpha * sum_{i in S} r_i
//        + beta  * sum_{i=1..n} max_{j in S} k(i, j)
//        + gamma * log det(I + eta * K_S)
//
// and its maximization under a token knapsack. With k >= 0, K PSD and
// r >= 0, F is monotone submodular; we run lazy greedy on gain-per-token
// and keep the best feasible singleton if it beats the greedy set.

#ifndef BUDGETCTX_RCD_HPP_
#define BUDGETCTX_RCD_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "budgetctx/features.hpp"
#include "budgetctx/selection.hpp"

namespace budgetctx {

// Objective weights. alpha/beta/gamma are projected onto the simplex on
// construction; eta scales the kernel inside the log-determinant.
class RcdWeights {
 public:
  RcdWeights() : RcdWeights(0.4, 0.4, 0.2, 1.0) {}
  // Throws ValidationError for negative weights, an all-zero triple, or
  // eta <= 0.
  RcdWeights(double alpha, double beta, double gamma, double eta = 1.0);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }

  friend bool operator==(const RcdWeights&, const RcdWeights&) = default;

 private:
  double alpha_;
  double beta_;
  double gamma_;
  double eta_;
};

// Incremental Cholesky factor of M_S = I + eta * K_S, grown by bordering.
//
// gain(e) solves L y = eta * K_{S,e} and returns log(1 + eta*K(e,e) - |y|^2),
// i.e. log det M_{S+e} - log det M_S, in O(|S|^2) without refactoring.
class LogDetState {
 public:
  LogDetState(const Matrix& kernel, double eta);

  // Throws NumericalBreakdownError if the bordered pivot is <= 0.
  double gain(std::size_t e) const;
  void add(std::size_t e);

  double value() const { return logdet_; }
  std::span<const std::size_t> members() const { return members_; }

 private:
  // Returns the squared pivot; fills `y` with the solved border row.
  double border(std::size_t e, std::vector<double>& y) const;

  const Matrix* kernel_;
  double eta_;
  std::vector<std::size_t> members_;
  std::vector<double> factor_;  // packed lower-triangular rows of L
  double logdet_ = 0.0;
};

// Free-function form: the gain of `candidate` w.r.t. the factorization held
// in `state`.
inline double logdet_marginal_gain(std::size_t candidate,
                                   const LogDetState& state) {
  return state.gain(candidate);
}

// Marginal-gain oracle for F with incremental coverage and log-det state.
class RcdState {
 public:
  RcdState(const FeatureSet& features, const RcdWeights& weights);

  double gain(std::size_t e) const;
  void add(std::size_t e);

  // Sum of accepted gains (equals F(S) up to rounding).
  double value() const { return value_; }
  std::span<const std::size_t> members() const { return logdet_.members(); }
  std::span<const double> best() const { return best_; }

 private:
  const FeatureSet* features_;
  RcdWeights weights_;
  std::vector<double> best_;
  LogDetState logdet_;
  double value_ = 0.0;
};

// Direct evaluation of F; log det via a fresh Cholesky of I + eta * K_S.
double rcd_objective(std::span<const std::size_t> selected,
                     const FeatureSet& features, const RcdWeights& weights);

// Lazy greedy (stale upper bounds in a max-heap) with best-singleton check.
// Ties go to the lowest unit index.
SelectionResult select_rcd(const SelectionProblem& problem,
                           const RcdWeights& weights);

// Serial reference: recomputes every candidate's gain each step. Same tie
// rule and singleton check as select_rcd. Kept for tests and benchmarks.
SelectionResult select_rcd_reference(const SelectionProblem& problem,
                                     const RcdWeights& weights);

}  // namespace budgetctx

#endif  // BUDGETCTX_RCD_HPP_
