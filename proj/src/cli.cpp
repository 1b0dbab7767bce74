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


#include "budgetctx/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "CLI11.hpp"

#include "budgetctx/bench.hpp"
#include "budgetctx/error.hpp"
#include "budgetctx/metrics.hpp"
#include "budgetctx/pipeline.hpp"
#include "budgetctx/routing.hpp"
#include "budgetctx/service.hpp"
#include "budgetctx/text.hpp"

extern char** environ;

namespace budgetctx::cli {
namespace {

using nlohmann::json;

// Every persisted field, in declaration order. `f(name, field)`.
template <typename C, typename F>
void visit_fields(C& c, F&& f) {
  f("corpus_path", c.corpus_path);
  f("doc_id", c.doc_id);
  f("budgets", c.budgets);
  f("unitization", c.unitization);
  f("methods", c.methods);
  f("policy_path", c.policy_path);
  f("weights", c.weights);
  f("eta", c.eta);
  f("mmr_lambda", c.mmr_lambda);
  f("edge_threshold", c.edge_threshold);
  f("max_anchors", c.max_anchors);
  f("seed", c.seed);
  f("window_base_words", c.window_base_words);
  f("window_overlap", c.window_overlap);
  f("cluster_threshold", c.cluster_threshold);
  f("cluster_halflife", c.cluster_halflife);
  f("tokens_per_word", c.tokens_per_word);
  f("embedder", c.embedder);
  f("embedding_dimension", c.embedding_dimension);
  f("embedding_endpoint", c.embedding_endpoint);
  f("embedding_api_key", c.embedding_api_key);
  f("embedding_timeout_s", c.embedding_timeout_s);
  f("embedding_retries", c.embedding_retries);
  f("max_in_flight", c.max_in_flight);
  f("price_in", c.price_in);
  f("price_out", c.price_out);
  f("output_tokens", c.output_tokens);
  f("out_path", c.out_path);
  f("format", c.format);
  f("provenance", c.provenance);
  f("soft_f1", c.soft_f1);
  f("timing", c.timing);
  f("jobs", c.jobs);
  f("metric", c.metric);
  f("report_path", c.report_path);
  f("grid_step", c.grid_step);
  f("tolerance", c.tolerance);
  f("sampling", c.sampling);
  f("samples", c.samples);
  f("generation_endpoint", c.generation_endpoint);
  f("generation_api_key", c.generation_api_key);
  f("generation_model", c.generation_model);
  f("prompt_template", c.prompt_template);
  f("max_output_tokens", c.max_output_tokens);
  f("generation_timeout_s", c.generation_timeout_s);
}

bool is_secret(std::string_view name) {
  return name.size() > 8 && name.substr(name.size() - 8) == "_api_key";
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::vector<std::int64_t> parse_budgets(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw ValidationError("--budgets: '" + item + "' is not an integer");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_weights(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw ValidationError("--weights: '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

// Settings resolved and checked before any corpus is read.
struct Resolved {
  std::vector<Unitization> unitizations;
  std::vector<Method> methods;
  bool route = false;
  RouterPolicy policy;
  SelectorParams selector;
  UnitizeOptions unitize;
  TokenCounter counter;
  EmbedderConfig embedder;
  PriceSchedule prices;
  ReportFormat format = ReportFormat::kJson;
};

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ValidationError(field + ": " + message);
}

void require_writable(const std::string& path, const std::string& field) {
  if (path.empty()) return;
  const auto parent = std::filesystem::absolute(path).parent_path();
  require(std::filesystem::is_directory(parent), field,
          "directory " + parent.string() + " does not exist");
}

Resolved resolve(const RunConfig& c, const std::string& command) {
  Resolved r;
  const bool needs_corpus = command != "pareto";
  require(!needs_corpus || !c.corpus_path.empty(), "corpus_path",
          "--corpus is required");
  require(!c.budgets.empty(), "budgets", "at least one budget is required");
  for (auto b : c.budgets) require(b > 0, "budgets", "budgets must be positive");
  if (command == "select" || command == "generate") {
    require(c.budgets.size() == 1, "budgets", command + " takes a single budget");
    require(c.methods.size() == 1, "methods", command + " takes a single method");
  }
  if (command == "calibrate") {
    require(c.budgets.size() >= 2, "budgets",
            "calibration needs at least two grid points so that b1 < b2");
  }

  for (const auto& u : split_list(c.unitization)) {
    r.unitizations.push_back(parse_unitization(u));
  }
  require(!r.unitizations.empty(), "unitization", "no unitization given");
  if (command != "sweep") {
    require(r.unitizations.size() == 1, "unitization",
            command + " takes a single unitization");
  }
  r.unitize.unitization = r.unitizations.front();

  for (const auto& m : c.methods) {
    if (m == "route") {
      r.route = true;
    } else {
      r.methods.push_back(parse_method(m));
    }
  }
  if (command == "sweep") {
    require(!r.route, "methods", "route is not a sweep method; calibrate instead");
  }
  if (r.route) {
    require(!c.policy_path.empty(), "policy_path",
            "method 'route' needs --policy (produce one with calibrate)");
    r.policy = load_policy(c.policy_path);
  }

  require(c.weights.size() == 3, "weights", "expected three values a,b,c");
  r.selector.rcd = RcdWeights(c.weights[0], c.weights[1], c.weights[2], c.eta);
  require(c.mmr_lambda >= 0.0 && c.mmr_lambda <= 1.0, "mmr_lambda", "must lie in [0, 1]");
  r.selector.mmr.lambda = c.mmr_lambda;
  r.selector.edge_threshold = c.edge_threshold;
  require(c.max_anchors >= 1, "max_anchors", "must be >= 1");
  r.selector.max_anchors = static_cast<std::size_t>(c.max_anchors);

  require(c.window_base_words >= 1, "window_base_words", "must be >= 1");
  require(c.window_overlap >= 0.0 && c.window_overlap < 1.0, "window_overlap",
          "must lie in [0, 1)");
  r.unitize.window = {static_cast<std::size_t>(c.window_base_words), c.window_overlap};
  require(c.cluster_halflife > 0.0, "cluster_halflife", "must be positive");
  r.unitize.cluster = {c.cluster_threshold, c.cluster_halflife};
  require(c.tokens_per_word > 0.0 && std::isfinite(c.tokens_per_word),
          "tokens_per_word", "must be positive");
  r.counter = TokenCounter::word_ratio(c.tokens_per_word);

  require(c.embedding_dimension > 0, "embedding_dimension", "must be positive");
  r.embedder.dimension = static_cast<int>(c.embedding_dimension);
  if (c.embedder == "hashed_tfidf") {
    r.embedder.kind = EmbedderKind::kHashedTfidf;
  } else if (c.embedder == "external_service") {
    r.embedder.kind = EmbedderKind::kExternalService;
    require(!c.embedding_endpoint.empty(), "embedding_endpoint",
            "external_service needs EMBEDDING_ENDPOINT or --embedding-endpoint");
    r.embedder.config = {{"endpoint", c.embedding_endpoint},
                         {"api_key", c.embedding_api_key},
                         {"timeout_s", std::to_string(c.embedding_timeout_s)},
                         {"retries", std::to_string(c.embedding_retries)},
                         {"max_in_flight", std::to_string(c.max_in_flight)}};
  } else {
    throw ValidationError("embedder: unknown kind '" + c.embedder +
                          "' (expected hashed_tfidf or external_service)");
  }

  require(c.price_in >= 0.0 && c.price_out >= 0.0, "prices", "must be nonnegative");
  r.prices = {c.price_in, c.price_out};
  require(c.output_tokens >= 0, "output_tokens", "must be nonnegative");
  r.format = parse_report_format(c.format);
  check_metric(c.metric);
  require(c.jobs >= 0, "jobs", "must be >= 0");
  require(c.grid_step > 0.0 && c.grid_step <= 1.0, "grid_step", "must lie in (0, 1]");
  require(c.tolerance >= 0.0, "tolerance", "must be nonnegative");
  require(c.sampling == "grid" || c.sampling == "dirichlet", "sampling",
          "expected grid or dirichlet");
  require(c.samples > 0, "samples", "must be positive");

  if (command == "sweep") require(!c.out_path.empty(), "out_path", "--out is required");
  if (command == "calibrate") {
    require(!c.out_path.empty() || !c.policy_path.empty(), "out_path",
            "--out (policy file) is required");
  }
  if (command == "pareto") {
    require(!c.report_path.empty(), "report_path", "--report is required");
  }
  if (command == "generate") {
    require(!c.generation_endpoint.empty(), "generation_endpoint",
            "set GENERATION_ENDPOINT or --endpoint");
    require(c.max_output_tokens > 0, "max_output_tokens", "must be positive");
    require(c.generation_timeout_s > 0.0, "generation_timeout_s", "must be positive");
  }
  require_writable(c.out_path, "out_path");
  return r;
}

std::shared_ptr<const Embedder> build_embedder(const Resolved& r) {
  return std::shared_ptr<const Embedder>(make_embedder(r.embedder));
}

const Document& find_document(const Corpus& corpus, const std::string& id) {
  if (corpus.documents.empty()) throw ValidationError("corpus is empty");
  if (id.empty()) return corpus.documents.front();
  for (const auto& d : corpus.documents) {
    if (d.id == id) return d;
  }
  throw ValidationError("doc_id: no document '" + id + "' in the corpus");
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

SweepParams sweep_params(const RunConfig& c, const Resolved& r,
                         std::vector<Method> methods) {
  SweepParams p;
  p.budgets = c.budgets;
  p.unitizations = r.unitizations;
  p.methods = std::move(methods);
  p.unitize = r.unitize;
  p.selector = r.selector;
  p.counter = r.counter;
  p.embedder = build_embedder(r);
  p.prices = r.prices;
  p.output_tokens = c.output_tokens;
  p.seed = c.seed;
  p.soft_f1 = c.soft_f1;
  p.record_timing = c.timing;
  p.jobs = static_cast<int>(c.jobs);
  return p;
}

void print_summary(const EvalReport& report, const std::string& metric,
                   std::ostream& out) {
  out << "budget  unitization  method         " << metric << "\n";
  for (const auto& [key, score] : mean_scores(report, metric)) {
    const auto& [budget, unit, method] = key;
    out << std::left << std::setw(8) << budget << std::setw(13) << unit
        << std::setw(15) << method << fixed(score) << "\n";
  }
  if (!report.failures.empty()) {
    out << report.failures.size() << " cell(s) failed; see \"failures\" in the report\n";
  }
}

// Settings that cannot change results stay out of the echo, so reruns that
// only move the output file or the thread count produce identical bytes.
json echoed_config(const RunConfig& c) {
  json j = to_json(c);
  j.erase("out_path");
  j.erase("jobs");
  return j;
}

int cmd_select(const RunConfig& c, const Resolved& r, std::ostream& out) {
  const Corpus corpus = load_corpus(c.corpus_path);
  const Document& doc = find_document(corpus, c.doc_id);
  const auto embedder = build_embedder(r);
  const std::int64_t budget = c.budgets.front();
  const Method method = r.route ? route(budget, r.policy) : r.methods.front();

  const PreparedDocument prepared =
      prepare_document(doc, r.counter, r.unitize, *embedder);
  const SelectionResult sel =
      select_context(prepared, method, budget, r.selector, document_seed(c.seed, doc.id));

  json provenance = json::array();
  for (std::size_t i : sel.selected) {
    const Unit& u = prepared.units[i];
    provenance.push_back({{"index", u.index},
                          {"char_span", {u.span.start, u.span.end}},
                          {"section_label", u.section_label},
                          {"token_cost", u.token_cost}});
  }

  out << "doc: " << doc.id << "\n"
      << "method: " << to_string(method) << (r.route ? " (routed)" : "") << "\n"
      << "budget: " << budget << "\n"
      << "cost: " << sel.total_cost << "\n"
      << "units: " << sel.selected.size() << " of " << prepared.units.size() << "\n";
  if (c.provenance) {
    for (const auto& p : provenance) {
      const std::string label = p["section_label"];
      out << "unit " << p["index"].get<std::size_t>() << " span=["
          << p["char_span"][0].get<std::size_t>() << ","
          << p["char_span"][1].get<std::size_t>() << ") section="
          << (label.empty() ? "-" : label) << " tokens="
          << p["token_cost"].get<std::int64_t>() << "\n";
    }
  }
  out << "\n" << sel.context_text << "\n";

  if (!c.out_path.empty()) {
    json j = {{"doc_id", doc.id},
              {"budget", budget},
              {"method", to_string(method)},
              {"routed", r.route},
              {"selected", sel.selected},
              {"total_cost", sel.total_cost},
              {"context", sel.context_text},
              {"provenance", provenance},
              {"config", echoed_config(c)}};
    if (sel.objective_value) j["objective_value"] = *sel.objective_value;
    write_file_atomic(c.out_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& c, const Resolved& r, std::ostream& out) {
  const Corpus corpus = load_corpus(c.corpus_path);
  require_references(corpus);
  EvalReport report = run_sweep(corpus, sweep_params(c, r, r.methods));
  report.config = echoed_config(c);
  save_report(report, c.out_path, r.format);
  print_summary(report, c.metric == "soft_f1" && !c.soft_f1 ? "rouge1" : c.metric, out);
  out << "wrote " << report.rows.size() << " rows to " << c.out_path << "\n";
  return kExitOk;
}

int cmd_calibrate(const RunConfig& c, const Resolved& r, std::ostream& out) {
  const Corpus corpus = load_corpus(c.corpus_path);
  require_references(corpus);
  RouterPolicy tmpl;
  if (!c.policy_path.empty() && std::filesystem::exists(c.policy_path) &&
      !c.out_path.empty()) {
    tmpl = load_policy(c.policy_path);
  }
  SweepParams p = sweep_params(c, r, {tmpl.low_method, tmpl.mid_method, tmpl.high_method});
  p.unitizations = {r.unitize.unitization};
  const EvalReport sweep = run_sweep(corpus, p);
  const RouterPolicy policy =
      calibrate_thresholds(sweep, c.budgets, c.metric, tmpl,
                           to_string(r.unitize.unitization));
  const std::string path = c.out_path.empty() ? c.policy_path : c.out_path;
  save_policy(policy, path);
  out << "b1: " << policy.b1 << "\n"
      << "b2: " << (policy.b2 == kUnboundedBudget ? std::string("unbounded")
                                                   : std::to_string(policy.b2))
      << "\n"
      << "wrote policy to " << path << "\n";
  return kExitOk;
}

int cmd_sensitivity(const RunConfig& c, const Resolved& r, std::ostream& out) {
  const Corpus corpus = load_corpus(c.corpus_path);
  require_references(corpus);
  json grids = json::array();
  for (std::int64_t budget : c.budgets) {
    SensitivityParams p;
    p.budget = budget;
    p.grid_step = c.grid_step;
    p.eta = c.eta;
    p.tolerance = c.tolerance;
    p.sampling = c.sampling == "grid" ? SimplexSampling::kGrid : SimplexSampling::kDirichlet;
    p.dirichlet_samples = static_cast<std::size_t>(c.samples);
    p.seed = c.seed;
    p.metric = c.metric;
    p.unitize = r.unitize;
    p.counter = r.counter;
    p.embedder = build_embedder(r);
    p.jobs = static_cast<int>(c.jobs);
    const SensitivityGrid g = sensitivity_sweep(corpus, p);

    json samples = json::array();
    for (const auto& s : g.samples) {
      samples.push_back({{"alpha", s.weights.alpha()},
                         {"beta", s.weights.beta()},
                         {"gamma", s.weights.gamma()},
                         {"mean_score", s.mean_score},
                         {"distance_to_best", s.distance_to_best}});
    }
    grids.push_back({{"budget", budget},
                     {"best_weights",
                      {g.best_weights.alpha(), g.best_weights.beta(),
                       g.best_weights.gamma()}},
                     {"best_score", g.best_score},
                     {"tolerance", g.tolerance},
                     {"stability_fraction", g.stability_fraction},
                     {"samples", samples}});
    out << "budget " << budget << ": best (" << fixed(g.best_weights.alpha(), 2) << ", "
        << fixed(g.best_weights.beta(), 2) << ", " << fixed(g.best_weights.gamma(), 2)
        << ") " << c.metric << "=" << fixed(g.best_score)
        << " stability=" << fixed(g.stability_fraction, 3) << "\n";
  }
  if (!c.out_path.empty()) {
    const json j = {{"distance", "half_l1"},
                    {"grids", grids},
                    {"config", echoed_config(c)}};
    write_file_atomic(c.out_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_pareto(const RunConfig& c, const Resolved& r, std::ostream& out) {
  const EvalReport report = load_report(c.report_path);
  const auto envelope = pareto_envelope(report, c.metric);
  std::vector<std::pair<std::int64_t, double>> routed;
  std::vector<OracleBound> bounds;
  if (r.route) {
    const std::string unit(to_string(r.unitize.unitization));
    routed = routed_curve(report, r.policy, c.metric, unit);
    bounds = oracle_bounds(report, c.metric, unit);
  }
  std::string csv = "budget,score,unitization,method";
  if (r.route) csv += ",routed,oracle_lower,oracle_upper";
  csv += "\n";
  for (const auto& p : envelope) {
    csv += std::to_string(p.budget) + "," + fixed(p.score, 6) + "," + p.unitization +
           "," + p.method;
    if (r.route) {
      for (std::size_t i = 0; i < routed.size(); ++i) {
        if (routed[i].first != p.budget) continue;
        csv += "," + fixed(routed[i].second, 6) + "," + fixed(bounds[i].lower, 6) +
               "," + fixed(bounds[i].upper, 6);
      }
    }
    csv += "\n";
  }
  if (c.out_path.empty()) {
    out << csv;
  } else {
    write_file_atomic(c.out_path, csv);
    out << "wrote " << envelope.size() << " envelope points to " << c.out_path << "\n";
  }
  return kExitOk;
}

int cmd_generate(const RunConfig& c, const Resolved& r, std::ostream& out) {
  ServiceEndpoint endpoint;
  endpoint.url = c.generation_endpoint;
  endpoint.api_key = c.generation_api_key;
  endpoint.timeout_s = c.generation_timeout_s;
  endpoint.retries = static_cast<int>(c.embedding_retries);
  const GenerationClient client(
      endpoint, c.generation_model,
      c.prompt_template.empty() ? std::string(kDefaultPromptTemplate) : c.prompt_template,
      c.max_output_tokens);

  const Corpus corpus = load_corpus(c.corpus_path);
  const Document& doc = find_document(corpus, c.doc_id);
  const auto embedder = build_embedder(r);
  const std::int64_t budget = c.budgets.front();
  const Method method = r.route ? route(budget, r.policy) : r.methods.front();
  const PreparedDocument prepared =
      prepare_document(doc, r.counter, r.unitize, *embedder);
  const SelectionResult sel =
      select_context(prepared, method, budget, r.selector, document_seed(c.seed, doc.id));

  const GenerationOutput gen = client.generate(sel.context_text);
  const std::int64_t input_tokens = gen.prompt_tokens.value_or(sel.total_cost);
  const std::int64_t output_tokens =
      gen.completion_tokens.value_or(r.counter.count(gen.text));
  const double cost = estimate_cost(input_tokens, output_tokens, r.prices);

  json j = {{"doc_id", doc.id},
            {"budget", budget},
            {"method", to_string(method)},
            {"model", client.model()},
            {"context_tokens", sel.total_cost},
            {"input_tokens", input_tokens},
            {"output_tokens", output_tokens},
            {"estimated_cost", cost},
            {"context", sel.context_text},
            {"output", gen.text},
            {"config", echoed_config(c)}};
  if (doc.reference) {
    j["rouge1"] = rouge1(gen.text, *doc.reference).f1;
    j["rouge2"] = rouge2(gen.text, *doc.reference).f1;
    j["token_f1"] = token_f1(gen.text, *doc.reference).f1;
  }
  out << "method: " << to_string(method) << "\n"
      << "input_tokens: " << input_tokens << "\n"
      << "output_tokens: " << output_tokens << "\n"
      << "estimated_cost: " << fixed(cost, 6) << "\n";
  if (doc.reference) out << "rouge1: " << fixed(j["rouge1"].get<double>()) << "\n";
  out << "\n" << gen.text << "\n";
  if (!c.out_path.empty()) write_file_atomic(c.out_path, j.dump(2) + "\n");
  return kExitOk;
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("--config: cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("--config " + path + ": " + e.what());
  }
  apply_json(config, j);
}

}  // namespace

json to_json(const RunConfig& config) {
  json j = json::object();
  visit_fields(config, [&](const char* name, const auto& field) {
    using T = std::decay_t<decltype(field)>;
    if constexpr (std::is_same_v<T, std::string>) {
      j[name] = is_secret(name) ? (field.empty() ? "unset" : "set") : field;
    } else {
      j[name] = field;
    }
  });
  return j;
}

void apply_json(RunConfig& config, const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (is_secret(key)) {
      throw ValidationError("config key '" + key +
                            "' is a secret; pass it through the environment");
    }
    bool found = false;
    visit_fields(config, [&](const char* name, auto& field) {
      if (key != name) return;
      found = true;
      try {
        field = value.get<std::decay_t<decltype(field)>>();
      } catch (const json::exception&) {
        throw ValidationError("config key '" + key + "' has the wrong type");
      }
    });
    if (!found) throw ValidationError("unknown config key '" + key + "'");
  }
}

void apply_environment(RunConfig& config,
                       const std::map<std::string, std::string>& env) {
  auto set = [&](const char* var, std::string& field) {
    if (auto it = env.find(var); it != env.end() && !it->second.empty()) {
      field = it->second;
    }
  };
  set("EMBEDDING_ENDPOINT", config.embedding_endpoint);
  set("EMBEDDING_API_KEY", config.embedding_api_key);
  set("GENERATION_ENDPOINT", config.generation_endpoint);
  set("GENERATION_API_KEY", config.generation_api_key);
}

std::map<std::string, std::string> process_environment() {
  std::map<std::string, std::string> env;
  for (char** e = environ; e != nullptr && *e != nullptr; ++e) {
    const std::string_view kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string_view::npos) {
      env.emplace(std::string(kv.substr(0, eq)), std::string(kv.substr(eq + 1)));
    }
  }
  return env;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::map<std::string, std::string>& env) {
  CLI::App app{"Budgeted context selection for long documents", "budgetctx"};
  app.require_subcommand(1);

  // Flag values land here; only flags actually given override the config.
  RunConfig flags;
  std::string config_path;
  std::string budgets;
  std::string methods;
  std::string weights;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> given;

  auto track = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) {
    given.emplace_back(opt, std::move(apply));
  };
  auto bind = [&](CLI::App* sub, const std::string& name, auto RunConfig::*field,
                  const std::string& help) {
    track(sub->add_option(name, flags.*field, help),
          [field, &flags](RunConfig& c) { c.*field = flags.*field; });
  };
  auto bind_flag = [&](CLI::App* sub, const std::string& name, bool RunConfig::*field,
                       const std::string& help) {
    track(sub->add_flag(name, flags.*field, help),
          [field, &flags](RunConfig& c) { c.*field = flags.*field; });
  };

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    bind(sub, "--corpus", &RunConfig::corpus_path, "JSONL corpus");
    track(sub->add_option("--budgets,--budget", budgets, "comma-separated token budgets"),
          [&](RunConfig& c) { c.budgets = parse_budgets(budgets); });
    bind(sub, "--unitization", &RunConfig::unitization,
         "sentence, section, window or cluster");
    track(sub->add_option("--method,--methods", methods,
                          "selector name(s), comma-separated, or route"),
          [&](RunConfig& c) { c.methods = split_list(methods); });
    bind(sub, "--policy", &RunConfig::policy_path, "router policy JSON");
    track(sub->add_option("--weights", weights, "RCD weights a,b,c"),
          [&](RunConfig& c) { c.weights = parse_weights(weights); });
    bind(sub, "--eta", &RunConfig::eta, "log-det scale");
    bind(sub, "--lambda", &RunConfig::mmr_lambda, "MMR trade-off");
    bind(sub, "--edge-threshold", &RunConfig::edge_threshold, "GraphCluster edge threshold");
    bind(sub, "--max-anchors", &RunConfig::max_anchors, "Hierarchical anchors");
    bind(sub, "--seed", &RunConfig::seed, "random seed");
    bind(sub, "--window-words", &RunConfig::window_base_words, "window size in words");
    bind(sub, "--window-overlap", &RunConfig::window_overlap, "window overlap fraction");
    bind(sub, "--cluster-threshold", &RunConfig::cluster_threshold,
         "cluster merge threshold");
    bind(sub, "--cluster-halflife", &RunConfig::cluster_halflife,
         "cluster proximity half-life in sentences");
    bind(sub, "--tokens-per-word", &RunConfig::tokens_per_word, "token estimate ratio");
    bind(sub, "--embedder", &RunConfig::embedder, "hashed_tfidf or external_service");
    bind(sub, "--embedding-dimension", &RunConfig::embedding_dimension,
         "embedding dimension");
    bind(sub, "--embedding-endpoint", &RunConfig::embedding_endpoint,
         "embedding service URL");
    bind(sub, "--max-in-flight", &RunConfig::max_in_flight,
         "concurrent embedding requests");
    bind(sub, "--price-in", &RunConfig::price_in, "input price per million tokens");
    bind(sub, "--price-out", &RunConfig::price_out, "output price per million tokens");
    bind(sub, "--output-tokens", &RunConfig::output_tokens,
         "output tokens assumed by the cost model");
    bind(sub, "--out", &RunConfig::out_path, "output file");
    bind(sub, "--format", &RunConfig::format, "json or csv");
    bind(sub, "--jobs", &RunConfig::jobs, "worker threads (0 = default)");
    bind(sub, "--metric", &RunConfig::metric, "rouge1, rouge2, token_f1 or soft_f1");
    bind(sub, "--doc-id", &RunConfig::doc_id, "document id (default: first)");
  };

  auto* select = app.add_subcommand("select", "select a context for one document");
  common(select);
  bind_flag(select, "--provenance", &RunConfig::provenance, "print unit provenance");

  auto* sweep = app.add_subcommand("sweep", "score methods over a budget grid");
  common(sweep);
  bind_flag(sweep, "--soft-f1", &RunConfig::soft_f1, "also compute soft F1");
  bind_flag(sweep, "--timing", &RunConfig::timing, "record elapsed_ms");

  auto* calibrate = app.add_subcommand("calibrate", "fit router thresholds");
  common(calibrate);

  auto* sensitivity = app.add_subcommand("sensitivity", "RCD weight sensitivity");
  common(sensitivity);
  bind(sensitivity, "--grid-step", &RunConfig::grid_step, "simplex grid step");
  bind(sensitivity, "--tolerance", &RunConfig::tolerance, "stability tolerance");
  bind(sensitivity, "--sampling", &RunConfig::sampling, "grid or dirichlet");
  bind(sensitivity, "--samples", &RunConfig::samples, "Dirichlet sample count");

  auto* pareto = app.add_subcommand("pareto", "Pareto envelope of a sweep report");
  common(pareto);
  bind(pareto, "--report", &RunConfig::report_path, "sweep report JSON");

  auto* generate = app.add_subcommand("generate", "select, then call a generator");
  common(generate);
  bind(generate, "--endpoint", &RunConfig::generation_endpoint, "generation URL");
  bind(generate, "--model", &RunConfig::generation_model, "model identifier");
  bind(generate, "--prompt-template", &RunConfig::prompt_template,
       "template containing {context}");
  bind(generate, "--max-output-tokens", &RunConfig::max_output_tokens,
       "generation length cap");
  bind(generate, "--timeout", &RunConfig::generation_timeout_s, "request timeout (s)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    RunConfig config;
    apply_environment(config, env);
    if (!config_path.empty()) apply_config_file(config, config_path);
    for (const auto& [opt, apply] : given) {
      if (opt->count() > 0) apply(config);
    }
    const Resolved resolved = resolve(config, command);
    if (command == "select") return cmd_select(config, resolved, out);
    if (command == "sweep") return cmd_sweep(config, resolved, out);
    if (command == "calibrate") return cmd_calibrate(config, resolved, out);
    if (command == "sensitivity") return cmd_sensitivity(config, resolved, out);
    if (command == "pareto") return cmd_pareto(config, resolved, out);
    return cmd_generate(config, resolved, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ServiceError& e) {
    err << "service error: " << e.what() << "\n";
    return kExitService;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace budgetctx::cli
