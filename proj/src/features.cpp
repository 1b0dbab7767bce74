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

#include "budgetctx/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <utility>

#include "budgetctx/error.hpp"
#include "budgetctx/kernels.hpp"
#include "budgetctx/service.hpp"
#include "budgetctx/text.hpp"

namespace budgetctx {
namespace {

// Alternating PSD/box projections attempted before the identity blend.
constexpr int kMaxRepairPasses = 50;
constexpr double kRepairTrigger = -1e-6;

void clip_eigenvalues(Matrix& k) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
  Vector values = eig.eigenvalues().cwiseMax(0.0);
  k = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  k = 0.5 * (k + k.transpose()).eval();
}

void clamp_unit_interval(Matrix& k) { k = k.cwiseMax(0.0).cwiseMin(1.0); }

double min_eigenvalue(const Matrix& k) {
  if (k.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(k, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double parse_double(const std::map<std::string, std::string>& config,
                    const std::string& key, double fallback) {
  auto it = config.find(key);
  if (it == config.end() || it->second.empty()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ValidationError("embedder setting '" + key + "' is not a number: " +
                          it->second);
  }
}

}  // namespace

HashedTfidfEmbedder::HashedTfidfEmbedder(int dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension <= 0) throw ValidationError("embedding dimension must be positive");
}

std::size_t HashedTfidfEmbedder::bucket(std::string_view token) const {
  return static_cast<std::size_t>(fnv1a64(token, seed_) %
                                  static_cast<std::uint64_t>(dimension_));
}

Matrix HashedTfidfEmbedder::embed(std::span<const std::string> texts) const {
  const std::size_t n = texts.size();
  std::vector<std::vector<std::pair<std::size_t, int>>> counts(n);
  std::vector<int> df(static_cast<std::size_t>(dimension_), 0);

  for (std::size_t i = 0; i < n; ++i) {
    auto tokens = normalize_tokens(texts[i]);
    // Punctuation-only text still needs a direction; hash it verbatim.
    if (tokens.empty()) tokens.emplace_back(trim(texts[i]));
    std::unordered_map<std::size_t, int> tf;
    for (const auto& t : tokens) ++tf[bucket(t)];
    counts[i].assign(tf.begin(), tf.end());
    std::sort(counts[i].begin(), counts[i].end());
    for (const auto& [b, c] : counts[i]) ++df[b];
  }

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n), dimension_);
  const double docs = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [b, c] : counts[i]) {
      const double idf = std::log((1.0 + docs) / (1.0 + df[b])) + 1.0;
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b)) =
          (1.0 + std::log(static_cast<double>(c))) * idf;
    }
    const double norm = out.row(static_cast<Eigen::Index>(i)).norm();
    if (norm > 0.0) out.row(static_cast<Eigen::Index>(i)) /= norm;
  }
  return out;
}

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config) {
  switch (config.kind) {
    case EmbedderKind::kHashedTfidf: {
      const auto seed =
          static_cast<std::uint64_t>(parse_double(config.config, "seed", 0.0));
      return std::make_unique<HashedTfidfEmbedder>(config.dimension, seed);
    }
    case EmbedderKind::kExternalService: {
      ServiceEndpoint endpoint;
      auto it = config.config.find("endpoint");
      if (it == config.config.end() || it->second.empty()) {
        throw ValidationError(
            "external_service embedder needs an endpoint (EMBEDDING_ENDPOINT)");
      }
      endpoint.url = it->second;
      if (auto key = config.config.find("api_key"); key != config.config.end()) {
        endpoint.api_key = key->second;
      }
      endpoint.timeout_s = parse_double(config.config, "timeout_s", 30.0);
      endpoint.retries =
          static_cast<int>(parse_double(config.config, "retries", 2.0));
      endpoint.max_in_flight =
          static_cast<int>(parse_double(config.config, "max_in_flight", 4.0));
      return std::make_unique<ServiceEmbedder>(std::move(endpoint),
                                               config.dimension);
    }
  }
  throw ValidationError("unknown embedder kind");
}

Matrix embed_units(std::span<const Unit> units, const Embedder& embedder) {
  if (units.empty()) throw ValidationError("embed_units: no units");
  std::vector<std::string> texts;
  texts.reserve(units.size());
  for (const auto& u : units) texts.push_back(u.text);
  Matrix e = embedder.embed(texts);
  if (static_cast<std::size_t>(e.rows()) != units.size()) {
    throw ShapeMismatchError("embedder returned " + std::to_string(e.rows()) +
                             " rows for " + std::to_string(units.size()) +
                             " units");
  }
  return e;
}

Vector compute_relevance(const Matrix& embeddings,
                         const std::optional<Vector>& query) {
  if (embeddings.rows() == 0) throw ValidationError("compute_relevance: no rows");
  Vector target;
  if (query) {
    if (query->size() != embeddings.cols()) {
      throw ShapeMismatchError("query dimension " + std::to_string(query->size()) +
                               " != embedding dimension " +
                               std::to_string(embeddings.cols()));
    }
    target = *query;
  } else {
    target = embeddings.colwise().mean().transpose();
  }
  const double tnorm = target.norm();
  if (!(tnorm > 0.0)) {
    throw DegenerateFeaturesError(
        query ? "query embedding has zero norm"
              : "embedding centroid has zero norm (all-zero embeddings?)");
  }
  Vector rel(embeddings.rows());
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    const double rnorm = embeddings.row(i).norm();
    const double cos =
        rnorm > 0.0 ? embeddings.row(i).dot(target) / (rnorm * tnorm) : 0.0;
    rel[i] = std::max(0.0, cos);
  }
  return rel;
}

Matrix build_kernel(const Matrix& embeddings) {
  Matrix k = kernels::gram_parallel(embeddings);
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    k(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < k.cols(); ++j) {
      const double v = std::min(1.0, 0.5 * (k(i, j) + k(j, i)));
      k(i, j) = k(j, i) = v;
    }
  }
  return k;
}

Matrix condition_kernel(const Matrix& kernel) {
  if (kernel.rows() != kernel.cols()) {
    throw ShapeMismatchError("condition_kernel: kernel is " +
                             std::to_string(kernel.rows()) + "x" +
                             std::to_string(kernel.cols()));
  }
  const Eigen::Index n = kernel.rows();
  if (n == 0) return kernel;

  Matrix k = 0.5 * (kernel + kernel.transpose());
  clip_eigenvalues(k);
  clamp_unit_interval(k);

  // Clamping can push eigenvalues back below zero. Alternate projections a
  // few times, then blend toward I, which keeps entries in [0, 1] and lifts
  // the spectrum: (1 - t) * lmin + t = 0 for t = -lmin / (1 - lmin).
  double lmin = min_eigenvalue(k);
  for (int pass = 0; pass < kMaxRepairPasses && lmin < kRepairTrigger; ++pass) {
    clip_eigenvalues(k);
    clamp_unit_interval(k);
    lmin = min_eigenvalue(k);
  }
  if (lmin < 0.0) {
    const double t = -lmin / (1.0 - lmin);
    k = (1.0 - t) * k + t * Matrix::Identity(n, n);
  }
  k.diagonal().array() += kKernelJitter;
  return k;
}

FeatureSet build_features(std::span<const Unit> units, const Embedder& embedder,
                          const std::optional<std::string>& query) {
  if (units.empty()) throw ValidationError("build_features: no units");
  std::vector<std::string> texts;
  texts.reserve(units.size() + 1);
  for (const auto& u : units) texts.push_back(u.text);
  if (query) texts.push_back(*query);

  Matrix all = embedder.embed(texts);
  if (static_cast<std::size_t>(all.rows()) != texts.size()) {
    throw ShapeMismatchError("embedder returned " + std::to_string(all.rows()) +
                             " rows for " + std::to_string(texts.size()) +
                             " texts");
  }
  const auto n = static_cast<Eigen::Index>(units.size());
  FeatureSet f;
  f.embeddings = all.topRows(n);
  std::optional<Vector> q;
  if (query) q = all.row(n).transpose();
  f.relevance = compute_relevance(f.embeddings, q);
  f.kernel = build_kernel(f.embeddings);
  if (!embedder.nonnegative()) f.kernel = condition_kernel(f.kernel);
  return f;
}

FeatureSet make_feature_set(Matrix embeddings, Vector relevance, Matrix kernel) {
  if (kernel.rows() != kernel.cols() || kernel.rows() != relevance.size()) {
    throw ShapeMismatchError("feature set: kernel " + std::to_string(kernel.rows()) +
                             "x" + std::to_string(kernel.cols()) +
                             " vs relevance " + std::to_string(relevance.size()));
  }
  if (embeddings.size() > 0 && embeddings.rows() != relevance.size()) {
    throw ShapeMismatchError("feature set: embeddings rows != relevance size");
  }
  if ((relevance.array() < 0.0).any()) {
    throw ValidationError("feature set: relevance must be nonnegative");
  }
  FeatureSet f;
  f.embeddings = std::move(embeddings);
  f.relevance = std::move(relevance);
  f.kernel = std::move(kernel);
  return f;
}

}  // namespace budgetctx
