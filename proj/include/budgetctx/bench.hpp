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

// Evaluation harness: corpora, budget sweeps, Pareto envelopes, the RCD
// weight-sensitivity study and the Lead-vs-Shuffled position experiment.

#ifndef BUDGETCTX_BENCH_HPP_
#define BUDGETCTX_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "budgetctx/metrics.hpp"
#include "budgetctx/pipeline.hpp"
#include "budgetctx/report.hpp"
#include "budgetctx/selectors.hpp"

namespace budgetctx {

enum class Split { kTrain, kValidation, kTest };

struct Corpus {
  std::string name;
  Split split = Split::kTest;
  std::vector<Document> documents;
};

// JSON Lines, one {id, text, reference?, query?} object per line. Blank
// lines are skipped. Throws ParseError (with line number) for malformed
// lines, a missing/empty "text" or "id", and duplicate ids; IoError if the
// file cannot be read.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl, std::string name = "corpus");
std::string corpus_to_jsonl(const Corpus& corpus);

// Throws ValidationError naming the first documents without a reference.
void require_references(const Corpus& corpus);

struct SweepParams {
  std::vector<std::int64_t> budgets = {256, 512, 1024, 2048, 4096, 8192, 16384};
  std::vector<Unitization> unitizations = {Unitization::kSentence};
  std::vector<Method> methods = {Method::kLead, Method::kMmr, Method::kRcd};
  UnitizeOptions unitize;
  SelectorParams selector;
  TokenCounter counter;
  // Shared read-only across workers. Defaults to HashedTfidfEmbedder.
  std::shared_ptr<const Embedder> embedder;
  PriceSchedule prices;
  // Output-token count assumed by the cost model (0 in extractive mode).
  std::int64_t output_tokens = 0;
  std::uint64_t seed = 0;
  bool soft_f1 = false;
  // Wall-clock timing makes reports non-reproducible, so it is opt-in.
  bool record_timing = false;
  // <= 0 keeps the OpenMP default.
  int jobs = 0;
};

// Per-document seed for the Shuffled selector.
std::uint64_t document_seed(std::uint64_t seed, std::string_view doc_id);

// Every (doc, budget, unitization, method) combination, extractive mode:
// the concatenated context is scored against the reference. Failures are
// recorded per cell and the sweep continues. Rows are sorted by
// (doc position, budget, unitization, method) independent of scheduling.
EvalReport run_sweep(const Corpus& corpus, const SweepParams& params);

struct EnvelopePoint {
  std::int64_t budget = 0;
  double score = 0.0;
  std::string unitization;
  std::string method;
};

// Best mean metric per budget over all (unitization, method) policies.
// Throws UnknownMetricError.
std::vector<EnvelopePoint> pareto_envelope(const EvalReport& report,
                                           std::string_view metric = "rouge1");

// Plot-ready means: one row per budget x unitization x method.
std::string curves_csv(const EvalReport& report, std::string_view metric);

struct WeightSample {
  RcdWeights weights;
  double mean_score = 0.0;
  // Half L1 between (alpha, beta, gamma) vectors: the earth mover's distance
  // on three categories with unit ground metric.
  double distance_to_best = 0.0;
};

struct SensitivityGrid {
  std::int64_t budget = 0;
  std::vector<WeightSample> samples;
  RcdWeights best_weights;
  double best_score = 0.0;
  double tolerance = 0.005;
  double stability_fraction = 0.0;
};

enum class SimplexSampling { kGrid, kDirichlet };

struct SensitivityParams {
  std::int64_t budget = 512;
  double grid_step = 0.1;
  double eta = 1.0;
  double tolerance = 0.005;
  SimplexSampling sampling = SimplexSampling::kGrid;
  std::size_t dirichlet_samples = 66;
  std::uint64_t seed = 0;
  std::string metric = "rouge1";
  UnitizeOptions unitize;
  TokenCounter counter;
  std::shared_ptr<const Embedder> embedder;
  int jobs = 0;
};

// All (alpha, beta, gamma) with components in {0, step, ..., 1} summing to
// one, alpha descending then beta descending. Throws ValidationError unless
// 1/step is (within 1e-9) a positive integer.
std::vector<RcdWeights> simplex_grid(double step, double eta = 1.0);

// Uniform Dirichlet(1, 1, 1) draws.
std::vector<RcdWeights> simplex_dirichlet(std::size_t count, std::uint64_t seed,
                                          double eta = 1.0);

double weight_distance(const RcdWeights& a, const RcdWeights& b);

// Share of samples scoring within `tolerance` of the best.
double stability_fraction(const SensitivityGrid& grid, double tolerance);

SensitivityGrid sensitivity_sweep(const Corpus& corpus,
                                  const SensitivityParams& params);

struct PositionDelta {
  std::int64_t budget = 0;
  double lead = 0.0;
  double shuffled = 0.0;  // mean over seeds
  double delta = 0.0;     // lead - shuffled
};

struct PositionParams {
  std::vector<std::int64_t> budgets = {256, 512, 1024, 2048};
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  std::string metric = "rouge1";
  UnitizeOptions unitize;
  TokenCounter counter;
  std::shared_ptr<const Embedder> embedder;
  int jobs = 0;
};

// Throws ValidationError for an empty seed list.
std::vector<PositionDelta> position_dependence(const Corpus& corpus,
                                               const PositionParams& params);

}  // namespace budgetctx

#endif  // BUDGETCTX_BENCH_HPP_
