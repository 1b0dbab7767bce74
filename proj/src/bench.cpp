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


#include "budgetctx/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "budgetctx/error.hpp"
#include "budgetctx/kernels.hpp"
#include "budgetctx/random.hpp"
#include "budgetctx/text.hpp"

namespace budgetctx {
namespace {

using nlohmann::json;

std::shared_ptr<const Embedder> embedder_or_default(
    const std::shared_ptr<const Embedder>& e) {
  if (e) return e;
  return std::make_shared<HashedTfidfEmbedder>();
}

int thread_count(int jobs) { return jobs > 0 ? jobs : kernels::max_threads(); }

double score_text(std::string_view metric, std::string_view candidate,
                  std::string_view reference, const Embedder& embedder) {
  if (metric == "rouge1") return rouge1(candidate, reference).f1;
  if (metric == "rouge2") return rouge2(candidate, reference).f1;
  if (metric == "token_f1") return token_f1(candidate, reference).f1;
  if (metric == "soft_f1") return soft_embed_f1(candidate, reference, embedder).f1;
  check_metric(metric);
  return 0.0;
}

// Prepares every document of the corpus, in parallel. Rethrows the first
// failure in document order.
std::vector<PreparedDocument> prepare_all(const Corpus& corpus,
                                          const TokenCounter& counter,
                                          const UnitizeOptions& options,
                                          const Embedder& embedder, int jobs) {
  const auto n = static_cast<long>(corpus.documents.size());
  std::vector<PreparedDocument> out(corpus.documents.size());
  std::vector<std::exception_ptr> errors(corpus.documents.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(jobs))
  for (long d = 0; d < n; ++d) {
    try {
      out[d] = prepare_document(corpus.documents[d], counter, options, embedder);
    } catch (...) {
      errors[d] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

struct CellResult {
  std::vector<ReportRow> rows;
  std::vector<SweepFailure> failures;
  std::exception_ptr fatal;
};

}  // namespace

Corpus parse_corpus(std::string_view jsonl, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  std::unordered_map<std::string, long> seen;
  long line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t end = jsonl.find('\n', pos);
    if (end == std::string_view::npos) end = jsonl.size();
    const std::string_view line = trim(jsonl.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed JSON (" +
                           e.what() + ")",
                       line_no);
    }
    if (!j.is_object()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected an object",
                       line_no);
    }
    auto text_field = [&](const char* key, bool required) -> std::optional<std::string> {
      if (!j.contains(key) || j[key].is_null()) {
        if (required) {
          throw ParseError("line " + std::to_string(line_no) + ": missing \"" +
                               key + "\"",
                           line_no);
        }
        return std::nullopt;
      }
      if (!j[key].is_string()) {
        throw ParseError("line " + std::to_string(line_no) + ": \"" + key +
                             "\" must be a string",
                         line_no);
      }
      return j[key].get<std::string>();
    };

    Document doc;
    doc.id = *text_field("id", true);
    doc.text = *text_field("text", true);
    doc.reference = text_field("reference", false);
    doc.query = text_field("query", false);
    if (doc.id.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty \"id\"", line_no);
    }
    if (trim(doc.text).empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty \"text\"",
                       line_no);
    }
    if (auto it = seen.find(doc.id); it != seen.end()) {
      throw ParseError("duplicate id '" + doc.id + "' on lines " +
                           std::to_string(it->second) + " and " +
                           std::to_string(line_no),
                       line_no);
    }
    seen.emplace(doc.id, line_no);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read corpus " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_corpus(buf.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    json j = {{"id", d.id}, {"text", d.text}};
    if (d.reference) j["reference"] = *d.reference;
    if (d.query) j["query"] = *d.query;
    out += j.dump() + "\n";
  }
  return out;
}

void require_references(const Corpus& corpus) {
  std::string missing;
  std::size_t count = 0;
  for (const auto& d : corpus.documents) {
    if (d.reference) continue;
    if (++count <= 5) missing += (missing.empty() ? "" : ", ") + d.id;
  }
  if (count > 0) {
    throw ValidationError(std::to_string(count) +
                          " document(s) lack a reference: " + missing +
                          (count > 5 ? ", ..." : ""));
  }
}

std::uint64_t document_seed(std::uint64_t seed, std::string_view doc_id) {
  return mix_seed(seed ^ fnv1a64(doc_id));
}

EvalReport run_sweep(const Corpus& corpus, const SweepParams& params) {
  EvalReport report;
  if (params.methods.empty() || params.budgets.empty() ||
      params.unitizations.empty()) {
    return report;
  }
  require_references(corpus);
  for (std::int64_t b : params.budgets) {
    if (b <= 0) throw ValidationError("budgets must be positive");
  }
  const auto embedder = embedder_or_default(params.embedder);

  // One task per (document, unitization); features are budget independent.
  const std::size_t nu = params.unitizations.size();
  const auto tasks = static_cast<long>(corpus.documents.size() * nu);
  std::vector<CellResult> results(static_cast<std::size_t>(tasks));

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(params.jobs))
  for (long t = 0; t < tasks; ++t) {
    const auto& doc = corpus.documents[static_cast<std::size_t>(t) / nu];
    const Unitization unitization = params.unitizations[static_cast<std::size_t>(t) % nu];
    const std::string unit_name(to_string(unitization));
    CellResult& out = results[static_cast<std::size_t>(t)];
    auto fail = [&](std::int64_t budget, Method m, const std::string& msg) {
      out.failures.push_back({doc.id, budget, unit_name, std::string(to_string(m)), msg});
    };

    try {
      UnitizeOptions options = params.unitize;
      options.unitization = unitization;
      PreparedDocument prepared;
      try {
        prepared = prepare_document(doc, params.counter, options, *embedder);
      } catch (const ServiceError&) {
        throw;
      } catch (const Error& e) {
        for (std::int64_t b : params.budgets) {
          for (Method m : params.methods) fail(b, m, e.what());
        }
        continue;
      }
      const std::uint64_t seed = document_seed(params.seed, doc.id);
      for (std::int64_t budget : params.budgets) {
        for (Method m : params.methods) {
          try {
            const auto start = std::chrono::steady_clock::now();
            const SelectionResult sel =
                select_context(prepared, m, budget, params.selector, seed);
            const auto stop = std::chrono::steady_clock::now();
            ReportRow row;
            row.doc_id = doc.id;
            row.budget = budget;
            row.unitization = unit_name;
            row.method = std::string(to_string(m));
            if (m == Method::kRcd) row.rcd_weights = params.selector.rcd;
            const auto& ref = *doc.reference;
            row.rouge1 = rouge1(sel.context_text, ref).f1;
            row.rouge2 = rouge2(sel.context_text, ref).f1;
            row.token_f1 = token_f1(sel.context_text, ref).f1;
            if (params.soft_f1) {
              row.soft_f1 = soft_embed_f1(sel.context_text, ref, *embedder).f1;
            }
            row.selected_cost = sel.total_cost;
            row.estimated_cost =
                estimate_cost(sel.total_cost, params.output_tokens, params.prices);
            if (params.record_timing) {
              row.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   stop - start)
                                   .count();
            }
            out.rows.push_back(std::move(row));
          } catch (const ServiceError&) {
            throw;
          } catch (const Error& e) {
            fail(budget, m, e.what());
          }
        }
      }
    } catch (...) {
      out.fatal = std::current_exception();
    }
  }

  for (const auto& r : results) {
    if (r.fatal) std::rethrow_exception(r.fatal);
  }
  // Task order is (doc, unitization); reorder each doc's rows by budget.
  auto method_rank = [&](const std::string& name) {
    return std::find_if(params.methods.begin(), params.methods.end(),
                        [&](Method m) { return to_string(m) == name; }) -
           params.methods.begin();
  };
  auto unit_rank = [&](const std::string& name) {
    return std::find_if(params.unitizations.begin(), params.unitizations.end(),
                        [&](Unitization u) { return to_string(u) == name; }) -
           params.unitizations.begin();
  };
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    std::vector<ReportRow> rows;
    std::vector<SweepFailure> failures;
    for (std::size_t u = 0; u < nu; ++u) {
      auto& r = results[d * nu + u];
      rows.insert(rows.end(), r.rows.begin(), r.rows.end());
      failures.insert(failures.end(), r.failures.begin(), r.failures.end());
    }
    auto key = [&](std::int64_t budget, const std::string& unit,
                   const std::string& method) {
      return std::make_tuple(budget, unit_rank(unit), method_rank(method));
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) {
      return key(a.budget, a.unitization, a.method) <
             key(b.budget, b.unitization, b.method);
    });
    std::stable_sort(failures.begin(), failures.end(),
                     [&](const auto& a, const auto& b) {
                       return key(a.budget, a.unitization, a.method) <
                              key(b.budget, b.unitization, b.method);
                     });
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    report.failures.insert(report.failures.end(), failures.begin(), failures.end());
  }
  return report;
}

std::vector<EnvelopePoint> pareto_envelope(const EvalReport& report,
                                           std::string_view metric) {
  check_metric(metric);
  if (report.rows.empty()) throw ValidationError("pareto_envelope: empty report");
  std::vector<EnvelopePoint> out;
  for (const auto& [key, score] : mean_scores(report, metric)) {
    const auto& [budget, unit, method] = key;
    if (out.empty() || out.back().budget != budget) {
      out.push_back({budget, score, unit, method});
    } else if (score > out.back().score) {
      out.back() = {budget, score, unit, method};
    }
  }
  return out;
}

std::string curves_csv(const EvalReport& report, std::string_view metric) {
  std::string out = "budget,unitization,method," + std::string(metric) + "\n";
  char buf[64];
  for (const auto& [key, score] : mean_scores(report, metric)) {
    const auto& [budget, unit, method] = key;
    std::snprintf(buf, sizeof buf, "%.6f", score);
    out += std::to_string(budget) + "," + unit + "," + method + "," + buf + "\n";
  }
  return out;
}

std::vector<RcdWeights> simplex_grid(double step, double eta) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw ValidationError("grid step must lie in (0, 1]");
  }
  const double inv = 1.0 / step;
  const long k = std::lround(inv);
  if (k < 1 || std::abs(inv - static_cast<double>(k)) > 1e-9 * inv) {
    throw ValidationError("grid step must divide 1 (got " + std::to_string(step) + ")");
  }
  std::vector<RcdWeights> out;
  for (long a = k; a >= 0; --a) {
    for (long b = k - a; b >= 0; --b) {
      // Integer parts normalize exactly to a/k, b/k, g/k.
      out.emplace_back(static_cast<double>(a), static_cast<double>(b),
                       static_cast<double>(k - a - b), eta);
    }
  }
  return out;
}

std::vector<RcdWeights> simplex_dirichlet(std::size_t count, std::uint64_t seed,
                                          double eta) {
  Rng rng(seed);
  std::vector<RcdWeights> out;
  out.reserve(count);
  auto exponential = [&] { return -std::log1p(-uniform_unit(rng)); };
  while (out.size() < count) {
    const double a = exponential();
    const double b = exponential();
    const double g = exponential();
    if (a + b + g > 0.0) out.emplace_back(a, b, g, eta);
  }
  return out;
}

double weight_distance(const RcdWeights& a, const RcdWeights& b) {
  return 0.5 * (std::abs(a.alpha() - b.alpha()) + std::abs(a.beta() - b.beta()) +
                std::abs(a.gamma() - b.gamma()));
}

double stability_fraction(const SensitivityGrid& grid, double tolerance) {
  if (grid.samples.empty()) return 0.0;
  std::size_t within = 0;
  for (const auto& s : grid.samples) {
    if (s.mean_score >= grid.best_score - tolerance) ++within;
  }
  return static_cast<double>(within) / static_cast<double>(grid.samples.size());
}

SensitivityGrid sensitivity_sweep(const Corpus& corpus,
                                  const SensitivityParams& params) {
  check_metric(params.metric);
  if (!(params.tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
  if (params.budget <= 0) throw ValidationError("budget must be positive");
  if (corpus.documents.empty()) throw ValidationError("sensitivity: empty corpus");
  require_references(corpus);
  const auto embedder = embedder_or_default(params.embedder);

  const std::vector<RcdWeights> weights =
      params.sampling == SimplexSampling::kGrid
          ? simplex_grid(params.grid_step, params.eta)
          : simplex_dirichlet(params.dirichlet_samples, params.seed, params.eta);
  if (weights.empty()) throw ValidationError("sensitivity: no weight samples");

  const auto prepared = prepare_all(corpus, params.counter, params.unitize,
                                    *embedder, params.jobs);

  SensitivityGrid grid;
  grid.budget = params.budget;
  grid.tolerance = params.tolerance;
  grid.samples.resize(weights.size());
  std::vector<std::exception_ptr> errors(weights.size());
  const auto n = static_cast<long>(weights.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(params.jobs))
  for (long s = 0; s < n; ++s) {
    try {
      double sum = 0.0;
      for (std::size_t d = 0; d < prepared.size(); ++d) {
        const auto sel = select_rcd(prepared[d].problem(params.budget), weights[s]);
        sum += score_text(params.metric, sel.context_text,
                          *corpus.documents[d].reference, *embedder);
      }
      grid.samples[s] = {weights[s], sum / static_cast<double>(prepared.size()), 0.0};
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t s = 1; s < grid.samples.size(); ++s) {
    if (grid.samples[s].mean_score > grid.samples[best].mean_score) best = s;
  }
  grid.best_weights = grid.samples[best].weights;
  grid.best_score = grid.samples[best].mean_score;
  for (auto& s : grid.samples) {
    s.distance_to_best = weight_distance(s.weights, grid.best_weights);
  }
  grid.stability_fraction = stability_fraction(grid, params.tolerance);
  return grid;
}

std::vector<PositionDelta> position_dependence(const Corpus& corpus,
                                               const PositionParams& params) {
  if (params.seeds.empty()) throw ValidationError("position_dependence: no seeds");
  if (corpus.documents.empty()) throw ValidationError("position_dependence: empty corpus");
  check_metric(params.metric);
  require_references(corpus);
  const auto embedder = embedder_or_default(params.embedder);
  const auto prepared = prepare_all(corpus, params.counter, params.unitize,
                                    *embedder, params.jobs);

  std::vector<PositionDelta> out(params.budgets.size());
  std::vector<std::exception_ptr> errors(params.budgets.size());
  const auto nb = static_cast<long>(params.budgets.size());
  const double docs = static_cast<double>(prepared.size());
  const double seeds = static_cast<double>(params.seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(params.jobs))
  for (long b = 0; b < nb; ++b) {
    try {
      const std::int64_t budget = params.budgets[b];
      double lead_sum = 0.0;
      double shuffled_sum = 0.0;
      double delta_sum = 0.0;
      for (std::size_t d = 0; d < prepared.size(); ++d) {
        const auto& doc = corpus.documents[d];
        const double lead = score_text(
            params.metric, select_lead(prepared[d].problem(budget)).context_text,
            *doc.reference, *embedder);
        lead_sum += lead;
        double doc_delta = 0.0;
        for (std::uint64_t seed : params.seeds) {
          const auto sel =
              select_shuffled(prepared[d].problem(budget, document_seed(seed, doc.id)));
          const double shuffled =
              score_text(params.metric, sel.context_text, *doc.reference, *embedder);
          shuffled_sum += shuffled;
          // Differencing per draw keeps delta exactly 0 when the texts agree.
          doc_delta += lead - shuffled;
        }
        delta_sum += doc_delta / seeds;
      }
      out[b] = {budget, lead_sum / docs, shuffled_sum / (docs * seeds),
                delta_sum / docs};
    } catch (...) {
      errors[b] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace budgetctx
