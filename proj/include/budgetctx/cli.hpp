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

// Command-line frontend. Subcommands: select, sweep, calibrate, sensitivity,
// pareto, generate.
//
// Configuration precedence: flags > --config JSON file > environment >
// defaults. Exit codes: 0 success, 1 validation error, 2 runtime error,
// 3 external-service error.

#ifndef BUDGETCTX_CLI_HPP_
#define BUDGETCTX_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace budgetctx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;
inline constexpr int kExitService = 3;

struct RunConfig {
  std::string corpus_path;
  std::string doc_id;  // select/generate; empty = first document
  std::vector<std::int64_t> budgets = {256, 512, 1024, 2048, 4096, 8192, 16384};
  std::string unitization = "sentence";
  // Selector names, or "route". sweep accepts several.
  std::vector<std::string> methods = {"lead", "mmr", "rcd"};
  std::string policy_path;
  std::vector<double> weights = {0.4, 0.4, 0.2};
  double eta = 1.0;
  double mmr_lambda = 0.7;
  double edge_threshold = 0.5;
  std::int64_t max_anchors = 5;
  std::uint64_t seed = 0;

  std::int64_t window_base_words = 50;
  double window_overlap = 0.25;
  double cluster_threshold = 0.5;
  double cluster_halflife = 5.0;
  double tokens_per_word = 1.3;

  std::string embedder = "hashed_tfidf";
  std::int64_t embedding_dimension = 512;
  std::string embedding_endpoint;
  std::string embedding_api_key;
  double embedding_timeout_s = 30.0;
  std::int64_t embedding_retries = 2;
  std::int64_t max_in_flight = 4;

  double price_in = 0.0;
  double price_out = 0.0;
  std::int64_t output_tokens = 0;

  std::string out_path;
  std::string format = "json";
  bool provenance = false;
  bool soft_f1 = false;
  bool timing = false;
  std::int64_t jobs = 0;

  std::string metric = "rouge1";
  std::string report_path;  // pareto input
  double grid_step = 0.1;
  double tolerance = 0.005;
  std::string sampling = "grid";
  std::int64_t samples = 66;

  std::string generation_endpoint;
  std::string generation_api_key;
  std::string generation_model = "gpt-4o";
  std::string prompt_template;  // empty = built-in default
  std::int64_t max_output_tokens = 512;
  double generation_timeout_s = 60.0;
};

// Secrets are never echoed; *_api_key fields are reported as set/unset.
nlohmann::json to_json(const RunConfig& config);
// Unknown keys raise ValidationError naming the key.
void apply_json(RunConfig& config, const nlohmann::json& j);
// EMBEDDING_ENDPOINT, EMBEDDING_API_KEY, GENERATION_ENDPOINT,
// GENERATION_API_KEY.
void apply_environment(RunConfig& config,
                       const std::map<std::string, std::string>& env);
std::map<std::string, std::string> process_environment();

// `args` excludes the program name. Writes human output to `out` and
// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err,
        const std::map<std::string, std::string>& env = process_environment());

}  // namespace budgetctx::cli

#endif  // BUDGETCTX_CLI_HPP_
