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

#ifndef BUDGETCTX_REPORT_HPP_
#define BUDGETCTX_REPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "budgetctx/rcd.hpp"

namespace budgetctx {

struct ReportRow {
  std::string doc_id;
  std::int64_t budget = 0;
  std::string unitization;
  std::string method;
  std::optional<RcdWeights> rcd_weights;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double token_f1 = 0.0;
  std::optional<double> soft_f1;
  std::int64_t selected_cost = 0;
  double estimated_cost = 0.0;
  std::int64_t elapsed_ms = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// A (doc, budget, unitization, method) cell that raised instead of scoring.
struct SweepFailure {
  std::string doc_id;
  std::int64_t budget = 0;
  std::string unitization;
  std::string method;
  std::string message;

  friend bool operator==(const SweepFailure&, const SweepFailure&) = default;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  std::vector<SweepFailure> failures;
  // Effective run configuration, echoed for auditability. May be null.
  nlohmann::json config;
};

enum class ReportFormat { kJson, kCsv };
ReportFormat parse_report_format(std::string_view name);

// Metric keys: rouge1, rouge2, token_f1, soft_f1.
// Throws UnknownMetricError for other names.
void check_metric(std::string_view metric);
// Throws UnknownMetricError when the metric was not recorded on this row.
double metric_value(const ReportRow& row, std::string_view metric);

// Mean metric per (budget, unitization, method) cell, averaged over docs.
using CellKey = std::tuple<std::int64_t, std::string, std::string>;
std::map<CellKey, double> mean_scores(const EvalReport& report,
                                      std::string_view metric);

// Serialization is bit-stable: sorted keys, reals rounded to 6 decimals
// (JSON) or printed with %.6f (CSV). CSV holds the rows only, under a header
// of the ReportRow field names. Throws IoError naming the path.
void save_report(const EvalReport& report, const std::filesystem::path& path,
                 ReportFormat format);
std::string report_to_string(const EvalReport& report, ReportFormat format);

// JSON only. Throws ParseError / IoError.
EvalReport load_report(const std::filesystem::path& path);
EvalReport report_from_json(const nlohmann::json& j);

// Writes `contents` to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace budgetctx

#endif  // BUDGETCTX_REPORT_HPP_
