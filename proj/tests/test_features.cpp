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


#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "budgetctx/error.hpp"
#include "budgetctx/features.hpp"
#include "budgetctx/kernels.hpp"
#include "budgetctx/text_units.hpp"
#include "oracles.hpp"

using namespace budgetctx;

TEST_CASE("hashed tf-idf embedder") {
  const HashedTfidfEmbedder emb(512, 0);
  const std::vector<std::string> texts = {"the cat sat", "the cat sat", "dog runs far"};
  const Matrix e = emb.embed(texts);
  REQUIRE(e.rows() == 3);
  REQUIRE(e.cols() == 512);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(std::abs(e.row(i).norm() - 1.0) < 1e-9);
  CHECK(e.row(0) == e.row(1));
  CHECK(e.row(0).dot(e.row(1)) == doctest::Approx(1.0));
  CHECK((e.array() >= 0.0).all());

  // Disjoint vocabularies with no bucket collisions are orthogonal.
  std::vector<std::size_t> a = {emb.bucket("the"), emb.bucket("cat"), emb.bucket("sat")};
  std::vector<std::size_t> b = {emb.bucket("dog"), emb.bucket("runs"), emb.bucket("far")};
  bool collide = false;
  for (auto x : a) {
    for (auto y : b) collide |= x == y;
  }
  REQUIRE_FALSE(collide);
  CHECK(e.row(0).dot(e.row(2)) == 0.0);

  CHECK(emb.embed(texts) == e);
  CHECK(HashedTfidfEmbedder(512, 99).bucket("cat") != emb.bucket("cat"));
  // Punctuation-only text still gets a direction.
  const std::vector<std::string> odd = {"...", "a b"};
  CHECK(emb.embed(odd).row(0).norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(HashedTfidfEmbedder(0), ValidationError);
}

TEST_CASE("idf and sublinear tf weighting") {
  const HashedTfidfEmbedder emb(4096, 0);
  const std::vector<std::string> texts = {"alpha alpha beta", "alpha gamma"};
  const Matrix e = emb.embed(texts);
  // Row 0 before normalization: alpha (1 + log 2) * (log(3/3) + 1), beta 1 * (log(3/2) + 1).
  const double wa = 1.0 + std::log(2.0);
  const double wb = std::log(1.5) + 1.0;
  const double norm = std::sqrt(wa * wa + wb * wb);
  CHECK(e(0, emb.bucket("alpha")) == doctest::Approx(wa / norm));
  CHECK(e(0, emb.bucket("beta")) == doctest::Approx(wb / norm));
}

TEST_CASE("relevance") {
  Matrix same(3, 2);
  same << 0.6, 0.8, 0.6, 0.8, 0.6, 0.8;
  const Vector r = compute_relevance(same);
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(r[i] == doctest::Approx(1.0));

  Matrix rows(2, 2);
  rows << 0.9, std::sqrt(1 - 0.81), -0.1, std::sqrt(1 - 0.01);
  Vector q(2);
  q << 1.0, 0.0;
  const Vector clipped = compute_relevance(rows, q);
  CHECK(clipped[0] == doctest::Approx(0.9));
  CHECK(clipped[1] == 0.0);

  Vector orth(2);
  orth << 0.0, 0.0;
  CHECK_THROWS_AS(compute_relevance(rows, orth), DegenerateFeaturesError);
  Matrix basis = Matrix::Identity(2, 3);
  Vector q3(3);
  q3 << 0.0, 0.0, 1.0;
  CHECK(compute_relevance(basis, q3).isZero());

  CHECK_THROWS_AS(compute_relevance(Matrix::Zero(3, 4)), DegenerateFeaturesError);
  CHECK_THROWS_AS(compute_relevance(rows, Vector::Ones(5)), ShapeMismatchError);

  std::mt19937_64 rng(5);
  const Matrix e = oracle::random_embeddings(8, 5, rng);
  const Vector qq = e.row(3).transpose() + 0.1 * Vector::Ones(5);
  Eigen::Index a = 0, b = 0;
  compute_relevance(e, qq).maxCoeff(&a);
  compute_relevance(e, 7.5 * qq).maxCoeff(&b);
  CHECK(a == b);
}

TEST_CASE("kernel construction") {
  const Matrix k = build_kernel(Matrix::Identity(4, 6));
  CHECK(k == Matrix::Identity(4, 4));

  std::mt19937_64 rng(11);
  Matrix e = oracle::random_embeddings(7, 4, rng);
  e.row(5) = e.row(2);
  const Matrix g = build_kernel(e);
  CHECK(g(2, 5) == doctest::Approx(1.0));
  CHECK(g == g.transpose());
  CHECK(g.diagonal() == Vector::Ones(7));
  CHECK(oracle::min_eigenvalue(g) >= -1e-9);
  CHECK((g.array() >= 0.0).all());
}

TEST_CASE("condition_kernel goldens") {
  Matrix neg(2, 2);
  neg << 1.0, -0.5, -0.5, 1.0;
  // Eigenvalues 0.5 and 1.5 are already nonnegative; the clamp zeroes the
  // off-diagonals, leaving the identity plus jitter.
  const Matrix c = condition_kernel(neg);
  CHECK((c.array() >= 0.0).all());
  CHECK(oracle::min_eigenvalue(c) >= 0.0);
  CHECK((c - (1.0 + kKernelJitter) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  Matrix asym(2, 2);
  asym << 1.0, 0.4, 0.2, 1.0;
  const Matrix s = condition_kernel(asym);
  CHECK(s(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s(1, 0) == doctest::Approx(0.3).epsilon(1e-12));

  std::mt19937_64 rng(3);
  const Matrix e = oracle::random_embeddings(6, 3, rng);
  const Matrix g = build_kernel(e);
  const Matrix fixed = condition_kernel(g);
  CHECK((fixed - g - kKernelJitter * Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-7);

  CHECK_THROWS_AS(condition_kernel(Matrix::Ones(2, 3)), ShapeMismatchError);
  CHECK(condition_kernel(Matrix(0, 0)).size() == 0);
}

TEST_CASE("condition_kernel property: PSD, bounded, idempotent") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const Matrix k = condition_kernel(oracle::random_symmetric(n, rng));
    CHECK(oracle::min_eigenvalue(k) >= -1e-8);
    CHECK(k.maxCoeff() <= 1.0 + kKernelJitter);
    CHECK(k.minCoeff() >= 0.0);
    CHECK(k == k.transpose());
    const Matrix twice = condition_kernel(k);
    CHECK((twice - k).cwiseAbs().maxCoeff() <= 2 * kKernelJitter + 1e-12);
  }
}

TEST_CASE("serial and parallel kernels agree bitwise") {
  std::mt19937_64 rng(9);
  const Matrix e = oracle::random_embeddings(120, 33, rng, 0.2);
  const Matrix gs = kernels::gram_serial(e);
  const Matrix gp = kernels::gram_parallel(e);
  CHECK(gs == gp);
  CHECK((gs - e * e.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<double> best(120);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& b : best) b = u(rng);
  std::vector<double> a(120), b(120);
  kernels::coverage_gains_serial(gs, best, a);
  kernels::coverage_gains_parallel(gs, best, b);
  CHECK(a == b);
  double naive = 0.0;
  for (std::size_t i = 0; i < 120; ++i) naive += std::max(0.0, gs(i, 17) - best[i]);
  CHECK(a[17] == doctest::Approx(naive));

  kernels::raise_best(gs, 17, best);
  CHECK(kernels::coverage_gain(gs, best, 17) == 0.0);
}

TEST_CASE("build_features") {
  std::vector<Unit> units(3);
  units[0].text = "heart failure admitted";
  units[1].text = "heart failure treated";
  units[2].text = "unrelated billing code";
  const HashedTfidfEmbedder emb;
  const FeatureSet f = build_features(units, emb);
  CHECK(f.size() == 3);
  CHECK(f.kernel(0, 1) > f.kernel(0, 2));
  CHECK((f.relevance.array() >= 0.0).all());
  CHECK(f.kernel.diagonal() == Vector::Ones(3));

  const FeatureSet fq = build_features(units, emb, std::string("billing"));
  Eigen::Index top = 0;
  fq.relevance.maxCoeff(&top);
  CHECK(top == 2);
  CHECK_THROWS_AS(build_features(std::vector<Unit>{}, emb), ValidationError);

  CHECK_THROWS_AS(make_feature_set(Matrix(), Vector::Ones(2), Matrix::Identity(3, 3)),
                  ShapeMismatchError);
  CHECK_THROWS_AS(make_feature_set(Matrix(), -Vector::Ones(2), Matrix::Identity(2, 2)),
                  ValidationError);
}

TEST_CASE("make_embedder") {
  EmbedderConfig cfg;
  cfg.dimension = 64;
  cfg.config["seed"] = "3";
  auto e = make_embedder(cfg);
  CHECK(e->dimension() == 64);
  CHECK(e->nonnegative());
  cfg.kind = EmbedderKind::kExternalService;
  cfg.config.clear();
  CHECK_THROWS_AS(make_embedder(cfg), ValidationError);
  cfg.config["endpoint"] = "http://127.0.0.1:9/embed";
  auto s = make_embedder(cfg);
  CHECK_FALSE(s->nonnegative());
}
