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

#include "budgetctx/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace budgetctx::kernels {
namespace {

// Columns of `cols` are the vectors; contiguous in Eigen's default layout.
double column_dot(const Eigen::MatrixXd& cols, Eigen::Index a, Eigen::Index b) {
  const double* x = cols.col(a).data();
  const double* y = cols.col(b).data();
  double s = 0.0;
  for (Eigen::Index t = 0; t < cols.rows(); ++t) s += x[t] * y[t];
  return s;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

Eigen::MatrixXd gram_serial(const Eigen::MatrixXd& rows) {
  const Eigen::MatrixXd cols = rows.transpose();
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = g(j, i) = column_dot(cols, i, j);
    }
  }
  return g;
}

Eigen::MatrixXd gram_parallel(const Eigen::MatrixXd& rows) {
  const Eigen::MatrixXd cols = rows.transpose();
  const Eigen::Index n = rows.rows();
  Eigen::MatrixXd g(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = g(j, i) = column_dot(cols, i, j);
    }
  }
  return g;
}

double coverage_gain(const Eigen::MatrixXd& kernel, std::span<const double> best,
                     std::size_t e) {
  const double* col = kernel.col(static_cast<Eigen::Index>(e)).data();
  double g = 0.0;
  for (std::size_t i = 0; i < best.size(); ++i) {
    g += std::max(0.0, col[i] - best[i]);
  }
  return g;
}

void coverage_gains_serial(const Eigen::MatrixXd& kernel,
                           std::span<const double> best,
                           std::span<double> gains) {
  for (std::size_t e = 0; e < gains.size(); ++e) {
    gains[e] = coverage_gain(kernel, best, e);
  }
}

void coverage_gains_parallel(const Eigen::MatrixXd& kernel,
                             std::span<const double> best,
                             std::span<double> gains) {
  const auto n = static_cast<long>(gains.size());
#pragma omp parallel for schedule(static)
  for (long e = 0; e < n; ++e) {
    gains[e] = coverage_gain(kernel, best, static_cast<std::size_t>(e));
  }
}

void raise_best(const Eigen::MatrixXd& kernel, std::size_t e,
                std::span<double> best) {
  const double* col = kernel.col(static_cast<Eigen::Index>(e)).data();
  for (std::size_t i = 0; i < best.size(); ++i) {
    best[i] = std::max(best[i], col[i]);
  }
}

}  // namespace budgetctx::kernels
