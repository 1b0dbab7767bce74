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

// Data-parallel inner loops. Every OpenMP kernel has a serial twin that the
// tests compare against and the benchmark times. Both variants evaluate each
// output entry with the same scalar routine, so results are bitwise equal
// regardless of thread count.

#ifndef BUDGETCTX_KERNELS_HPP_
#define BUDGETCTX_KERNELS_HPP_

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace budgetctx::kernels {

// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
void set_threads(int n);

// G = X X^T for row vectors X (n x d).
Eigen::MatrixXd gram_serial(const Eigen::MatrixXd& rows);
Eigen::MatrixXd gram_parallel(const Eigen::MatrixXd& rows);

// Facility-location gain of candidate e given per-item best similarity:
//   sum_i max(0, K(i, e) - best[i]).
double coverage_gain(const Eigen::MatrixXd& kernel, std::span<const double> best,
                     std::size_t e);

// coverage_gain for every column, written to `gains`.
void coverage_gains_serial(const Eigen::MatrixXd& kernel,
                           std::span<const double> best, std::span<double> gains);
void coverage_gains_parallel(const Eigen::MatrixXd& kernel,
                             std::span<const double> best,
                             std::span<double> gains);

// best[i] = max(best[i], K(i, e)).
void raise_best(const Eigen::MatrixXd& kernel, std::size_t e,
                std::span<double> best);

}  // namespace budgetctx::kernels

#endif  // BUDGETCTX_KERNELS_HPP_
