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


#include "budgetctx/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "budgetctx/error.hpp"

namespace budgetctx {
namespace {

using nlohmann::json;

double round6(double x) {
  const double r = std::round(x * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

json weights_to_json(const RcdWeights& w) {
  return {{"alpha", round6(w.alpha())},
          {"beta", round6(w.beta())},
          {"gamma", round6(w.gamma())},
          {"eta", round6(w.eta())}};
}

json row_to_json(const ReportRow& r) {
  json j;
  j["doc_id"] = r.doc_id;
  j["budget"] = r.budget;
  j["unitization"] = r.unitization;
  j["method"] = r.method;
  j["rcd_weights"] = r.rcd_weights ? weights_to_json(*r.rcd_weights) : json();
  j["rouge1"] = round6(r.rouge1);
  j["rouge2"] = round6(r.rouge2);
  j["token_f1"] = round6(r.token_f1);
  j["soft_f1"] = r.soft_f1 ? json(round6(*r.soft_f1)) : json();
  j["selected_cost"] = r.selected_cost;
  j["estimated_cost"] = round6(r.estimated_cost);
  j["elapsed_ms"] = r.elapsed_ms;
  return j;
}

json failure_to_json(const SweepFailure& f) {
  return {{"doc_id", f.doc_id},
          {"budget", f.budget},
          {"unitization", f.unitization},
          {"method", f.method},
          {"message", f.message}};
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("report: missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: bad field '") + key + "': " + e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", round6(x));
  return buf;
}

std::string to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "doc_id,budget,unitization,method,rcd_weights,rouge1,rouge2,token_f1,"
         "soft_f1,selected_cost,estimated_cost,elapsed_ms\n";
  for (const auto& r : report.rows) {
    std::string weights;
    if (r.rcd_weights) {
      const auto& w = *r.rcd_weights;
      weights = fixed6(w.alpha()) + ";" + fixed6(w.beta()) + ";" +
                fixed6(w.gamma()) + ";" + fixed6(w.eta());
    }
    out << csv_field(r.doc_id) << ',' << r.budget << ',' << csv_field(r.unitization)
        << ',' << csv_field(r.method) << ',' << weights << ',' << fixed6(r.rouge1)
        << ',' << fixed6(r.rouge2) << ',' << fixed6(r.token_f1) << ','
        << (r.soft_f1 ? fixed6(*r.soft_f1) : std::string()) << ','
        << r.selected_cost << ',' << fixed6(r.estimated_cost) << ','
        << r.elapsed_ms << '\n';
  }
  return out.str();
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw ValidationError("unknown report format '" + std::string(name) +
                        "' (expected json or csv)");
}

void check_metric(std::string_view metric) {
  if (metric == "rouge1" || metric == "rouge2" || metric == "token_f1" ||
      metric == "soft_f1") {
    return;
  }
  throw UnknownMetricError("unknown metric '" + std::string(metric) +
                           "' (expected rouge1, rouge2, token_f1 or soft_f1)");
}

double metric_value(const ReportRow& row, std::string_view metric) {
  check_metric(metric);
  if (metric == "rouge1") return row.rouge1;
  if (metric == "rouge2") return row.rouge2;
  if (metric == "token_f1") return row.token_f1;
  if (!row.soft_f1) {
    throw UnknownMetricError("soft_f1 was not recorded for this report");
  }
  return *row.soft_f1;
}

std::map<CellKey, double> mean_scores(const EvalReport& report,
                                      std::string_view metric) {
  check_metric(metric);
  std::map<CellKey, std::pair<double, std::int64_t>> acc;
  for (const auto& r : report.rows) {
    auto& [sum, count] = acc[{r.budget, r.unitization, r.method}];
    sum += metric_value(r, metric);
    ++count;
  }
  std::map<CellKey, double> out;
  for (const auto& [key, v] : acc) {
    out[key] = v.first / static_cast<double>(v.second);
  }
  return out;
}

std::string report_to_string(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::kCsv) return to_csv(report);
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back(row_to_json(r));
  json failures = json::array();
  for (const auto& f : report.failures) failures.push_back(failure_to_json(f));
  json j = {{"rows", rows}, {"failures", failures}, {"config", report.config}};
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move report into " + path.string() + ": " + ec.message());
  }
}

void save_report(const EvalReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  write_file_atomic(path, report_to_string(report, format));
}

EvalReport report_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("report: top level is not an object");
  EvalReport report;
  for (const auto& r : field<json>(j, "rows")) {
    ReportRow row;
    row.doc_id = field<std::string>(r, "doc_id");
    row.budget = field<std::int64_t>(r, "budget");
    row.unitization = field<std::string>(r, "unitization");
    row.method = field<std::string>(r, "method");
    if (r.contains("rcd_weights") && !r["rcd_weights"].is_null()) {
      const auto& w = r["rcd_weights"];
      row.rcd_weights = RcdWeights(field<double>(w, "alpha"), field<double>(w, "beta"),
                                   field<double>(w, "gamma"), field<double>(w, "eta"));
    }
    row.rouge1 = field<double>(r, "rouge1");
    row.rouge2 = field<double>(r, "rouge2");
    row.token_f1 = field<double>(r, "token_f1");
    if (r.contains("soft_f1") && !r["soft_f1"].is_null()) {
      row.soft_f1 = field<double>(r, "soft_f1");
    }
    row.selected_cost = field<std::int64_t>(r, "selected_cost");
    row.estimated_cost = field<double>(r, "estimated_cost");
    if (r.contains("elapsed_ms")) row.elapsed_ms = field<std::int64_t>(r, "elapsed_ms");
    report.rows.push_back(std::move(row));
  }
  if (j.contains("failures")) {
    for (const auto& f : j["failures"]) {
      report.failures.push_back({field<std::string>(f, "doc_id"),
                                 field<std::int64_t>(f, "budget"),
                                 field<std::string>(f, "unitization"),
                                 field<std::string>(f, "method"),
                                 field<std::string>(f, "message")});
    }
  }
  if (j.contains("config")) report.config = j["config"];
  return report;
}

EvalReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read report " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("report " + path.string() + ": " + e.what());
  }
  return report_from_json(j);
}

}  // namespace budgetctx
