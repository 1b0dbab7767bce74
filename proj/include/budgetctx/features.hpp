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

#ifndef BUDGETCTX_FEATURES_HPP_
#define BUDGETCTX_FEATURES_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "budgetctx/text_units.hpp"

namespace budgetctx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Per-unit representation consumed by selectors and routing. Immutable once
// built; share it read-only across concurrent selections.
struct FeatureSet {
  Matrix embeddings;  // n x d, unit-normalized rows
  Vector relevance;   // n, nonnegative
  Matrix kernel;      // n x n, symmetric, entries in [0, 1], PSD

  std::size_t size() const { return static_cast<std::size_t>(relevance.size()); }
};

// Maps texts to unit-norm vectors of a fixed dimension.
class Embedder {
 public:
  virtual ~Embedder() = default;

  // One row per text. Implementations fit any corpus statistics on `texts`.
  virtual Matrix embed(std::span<const std::string> texts) const = 0;
  virtual int dimension() const = 0;
  // True when every output component is >= 0, which makes the Gram kernel
  // nonnegative and PSD without conditioning.
  virtual bool nonnegative() const { return false; }
};

// Token hashing into `dimension` buckets, sublinear TF, smoothed IDF fitted
// on the texts of each embed() call, L2 normalization.
class HashedTfidfEmbedder final : public Embedder {
 public:
  explicit HashedTfidfEmbedder(int dimension = 512, std::uint64_t seed = 0);

  Matrix embed(std::span<const std::string> texts) const override;
  int dimension() const override { return dimension_; }
  bool nonnegative() const override { return true; }

  std::size_t bucket(std::string_view token) const;

 private:
  int dimension_;
  std::uint64_t seed_;
};

enum class EmbedderKind { kHashedTfidf, kExternalService };

struct EmbedderConfig {
  EmbedderKind kind = EmbedderKind::kHashedTfidf;
  int dimension = 512;
  // hashed_tfidf: "seed". external_service: "endpoint", "api_key",
  // "timeout_s", "retries".
  std::map<std::string, std::string> config;
};

// Throws ValidationError for missing service settings.
std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config);

Matrix embed_units(std::span<const Unit> units, const Embedder& embedder);

// max(0, cos(row_i, target)); target is the query when given, otherwise the
// normalized centroid of the rows. Throws DegenerateFeaturesError when the
// target has zero norm.
Vector compute_relevance(const Matrix& embeddings,
                         const std::optional<Vector>& query = std::nullopt);

// Gram matrix of the rows, exactly symmetric, unit diagonal.
Matrix build_kernel(const Matrix& embeddings);

inline constexpr double kKernelJitter = 1e-8;

// Symmetrize, clip negative eigenvalues, clamp entries to [0, 1], repair
// any PSD violation the clamp introduced, then add kKernelJitter * I.
// Throws ShapeMismatchError for a non-square input.
Matrix condition_kernel(const Matrix& kernel);

// Embeds units (and the query, if any, in the same call), computes
// relevance and the kernel. Kernels from embedders that are not
// nonnegative() are passed through condition_kernel.
FeatureSet build_features(std::span<const Unit> units, const Embedder& embedder,
                          const std::optional<std::string>& query = std::nullopt);

// Assembles a FeatureSet from precomputed parts (tests, external callers).
FeatureSet make_feature_set(Matrix embeddings, Vector relevance, Matrix kernel);

}  // namespace budgetctx

#endif  // BUDGETCTX_FEATURES_HPP_
