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


// Independent reference computations for the test suite. Nothing here calls
// into Eigen's decompositions or the library's incremental updates.

#ifndef BUDGETCTX_TESTS_ORACLES_HPP_
#define BUDGETCTX_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "budgetctx/features.hpp"
#include "budgetctx/rcd.hpp"
#include "budgetctx/text_units.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const budgetctx::Matrix& m) {
  Dense d(static_cast<std::size_t>(m.rows()),
          std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  }
  return d;
}

// Cyclic Jacobi rotations; returns ascending eigenvalues of a symmetric
// matrix.
inline std::vector<double> jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double min_eigenvalue(const budgetctx::Matrix& m) {
  if (m.rows() == 0) return 0.0;
  return jacobi_eigenvalues(to_dense(m)).front();
}

// Gaussian elimination with partial pivoting.
inline double determinant(Dense a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// log det(I + eta K_S) by elimination.
inline double logdet_direct(const std::vector<std::size_t>& s,
                            const budgetctx::Matrix& k, double eta) {
  Dense m(s.size(), std::vector<double>(s.size()));
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s.size(); ++b) {
      m[a][b] = (a == b ? 1.0 : 0.0) + eta * k(s[a], s[b]);
    }
  }
  return std::log(determinant(m));
}

// alpha R + beta C + gamma D straight from the definition.
inline double objective(const std::vector<std::size_t>& s,
                        const budgetctx::FeatureSet& f,
                        const budgetctx::RcdWeights& w) {
  if (s.empty()) return 0.0;
  double r = 0.0;
  for (auto i : s) r += f.relevance[i];
  double c = 0.0;
  for (Eigen::Index i = 0; i < f.kernel.rows(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (auto j : s) best = std::max(best, f.kernel(i, j));
    c += best;
  }
  return w.alpha() * r + w.beta() * c + w.gamma() * logdet_direct(s, f.kernel, w.eta());
}

inline std::vector<std::size_t> members(std::uint32_t mask, std::size_t n) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (1u << i)) s.push_back(i);
  }
  return s;
}

// Best feasible subset by enumerating all 2^n subsets.
inline std::pair<double, std::vector<std::size_t>> exhaustive_knapsack(
    const std::vector<std::int64_t>& costs, std::int64_t budget,
    const std::function<double(const std::vector<std::size_t>&)>& value) {
  const std::size_t n = costs.size();
  double best = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> arg;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::int64_t cost = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) cost += costs[i];
    }
    if (cost > budget) continue;
    const auto s = members(mask, n);
    const double v = value(s);
    if (v > best) {
      best = v;
      arg = s;
    }
  }
  return {best, arg};
}

// All contiguous windows; best relevance sum, ties to the smaller start.
inline std::vector<std::size_t> brute_force_window(const std::vector<std::int64_t>& costs,
                                                   const std::vector<double>& rel,
                                                   std::int64_t budget) {
  double best = -1.0;
  std::vector<std::size_t> arg;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    std::int64_t cost = 0;
    double sum = 0.0;
    std::size_t j = i;
    while (j < costs.size() && cost + costs[j] <= budget) {
      cost += costs[j];
      sum += rel[j];
      ++j;
    }
    if (j > i && sum > best + 1e-12 * std::max(1.0, best)) {
      best = sum;
      arg.clear();
      for (std::size_t t = i; t < j; ++t) arg.push_back(t);
    }
  }
  return arg;
}

// Problem fixtures ---------------------------------------------------------

struct Instance {
  std::vector<budgetctx::Unit> units;
  budgetctx::FeatureSet features;

  std::vector<std::int64_t> costs() const {
    std::vector<std::int64_t> c;
    for (const auto& u : units) c.push_back(u.token_cost);
    return c;
  }
};

inline std::vector<budgetctx::Unit> make_units(const std::vector<std::int64_t>& costs) {
  std::vector<budgetctx::Unit> units(costs.size());
  for (std::size_t i = 0; i < costs.size(); ++i) {
    units[i].index = i;
    units[i].token_cost = costs[i];
    units[i].text = "u" + std::to_string(i);
    units[i].members = {i};
  }
  return units;
}

// Random nonnegative unit vectors: a Gram kernel with entries in [0, 1].
inline budgetctx::Matrix random_embeddings(std::size_t n, std::size_t d,
                                           std::mt19937_64& rng, double density = 0.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  budgetctx::Matrix e = budgetctx::Matrix::Zero(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      if (u(rng) < density) e(i, k) = u(rng);
    }
    e(i, static_cast<Eigen::Index>(i % d)) += 0.05;  // never all-zero
    e.row(i) /= e.row(i).norm();
  }
  return e;
}

inline budgetctx::Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  budgetctx::Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
  }
  return m;
}

// Units with random costs, relevance and a conditioned kernel.
inline Instance random_instance(std::size_t n, std::mt19937_64& rng,
                                std::int64_t max_cost = 20) {
  std::uniform_int_distribution<std::int64_t> cost(1, max_cost);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::int64_t> costs(n);
  for (auto& c : costs) c = cost(rng);
  Instance inst;
  inst.units = make_units(costs);
  budgetctx::Vector rel(n);
  for (std::size_t i = 0; i < n; ++i) rel[i] = u(rng);
  const auto emb = random_embeddings(n, 6, rng);
  inst.features = budgetctx::make_feature_set(emb, rel, budgetctx::build_kernel(emb));
  return inst;
}

}  // namespace oracle

#endif  // BUDGETCTX_TESTS_ORACLES_HPP_
