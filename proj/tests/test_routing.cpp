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
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "budgetctx/error.hpp"
#include "budgetctx/routing.hpp"
#include "oracles.hpp"

using namespace budgetctx;

namespace {

using Scores = std::map<std::int64_t, std::map<std::string, double>>;

// Two documents per cell whose mean is the requested score.
EvalReport sweep_from(const Scores& scores) {
  EvalReport r;
  for (const auto& [budget, methods] : scores) {
    for (const auto& [method, score] : methods) {
      for (int d = 0; d < 2; ++d) {
        ReportRow row;
        row.doc_id = "d" + std::to_string(d);
        row.budget = budget;
        row.unitization = "sentence";
        row.method = method;
        row.rouge1 = score + (d == 0 ? 0.01 : -0.01);
        r.rows.push_back(row);
      }
    }
  }
  return r;
}

// Independent evaluation of a threshold pair over a score table.
double pair_score(const Scores& scores, std::int64_t b1, std::int64_t b2) {
  double sum = 0.0;
  for (const auto& [budget, methods] : scores) {
    const char* m = budget <= b1 ? "lead" : budget <= b2 ? "mmr" : "rcd";
    sum += methods.at(m);
  }
  return sum / static_cast<double>(scores.size());
}

}  // namespace

TEST_CASE("document statistics") {
  const auto units = oracle::make_units(std::vector<std::int64_t>(10, 10));
  const FeatureSet uniform =
      make_feature_set(Matrix(), Vector::Constant(10, 0.5), Matrix::Ones(10, 10));
  const auto s = compute_doc_stats(units, uniform, 30);
  CHECK(s.front_loading_index == doctest::Approx(0.3));
  CHECK(s.redundancy_index == doctest::Approx(1.0));
  CHECK(s.unit_count == 10);
  CHECK(s.total_cost == 100);
  CHECK(compute_doc_stats(units, uniform, 1000).front_loading_index == 1.0);
  CHECK(compute_doc_stats(units, uniform, 5).front_loading_index == 0.0);

  const FeatureSet zero = make_feature_set(Matrix(), Vector::Zero(10), Matrix::Identity(10, 10));
  const auto z = compute_doc_stats(units, zero, 30);
  CHECK(z.front_loading_index == 0.0);
  CHECK(z.redundancy_index == 0.0);

  const auto one = oracle::make_units({10});
  const FeatureSet single = make_feature_set(Matrix(), Vector::Ones(1), Matrix::Ones(1, 1));
  CHECK(compute_doc_stats(one, single, 10).redundancy_index == 0.0);
}

TEST_CASE("front-loading is nondecreasing in budget") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = oracle::random_instance(1 + trial % 15, rng);
    double prev = -1.0;
    for (std::int64_t b = 0; b <= 320; b += 8) {
      const double phi = compute_doc_stats(inst.units, inst.features, b).front_loading_index;
      CHECK(phi >= prev - 1e-15);
      CHECK(phi >= 0.0);
      CHECK(phi <= 1.0 + 1e-12);
      prev = phi;
    }
  }
}

TEST_CASE("route follows the threshold policy") {
  const RouterPolicy p;  // 512 / 1024
  CHECK(route(256, p) == Method::kLead);
  CHECK(route(512, p) == Method::kLead);
  CHECK(route(513, p) == Method::kMmr);
  CHECK(route(1024, p) == Method::kMmr);
  CHECK(route(1025, p) == Method::kRcd);
  CHECK(route(2048, p) == Method::kRcd);
  int prev = 0;
  for (std::int64_t b = 1; b < 4096; b += 7) {
    const Method m = route(b, p);
    const int rank = m == Method::kLead ? 0 : m == Method::kMmr ? 1 : 2;
    CHECK(rank >= prev);
    prev = rank;
  }
  CHECK_THROWS_AS(validate(RouterPolicy{1024, 512}), ValidationError);
  CHECK_THROWS_AS(validate(RouterPolicy{0, 512}), ValidationError);
}

TEST_CASE("policy json round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "budgetctx_test_routing";
  std::filesystem::create_directories(dir);
  const RouterPolicy p{300, kUnboundedBudget, Method::kSliding, Method::kMmr, Method::kRcd};
  CHECK(policy_to_json(p)["b2"].is_null());
  save_policy(p, dir / "p.json");
  CHECK(load_policy(dir / "p.json") == p);
  CHECK(policy_from_json(policy_to_json(RouterPolicy{})) == RouterPolicy{});
  std::ofstream(dir / "bad.json") << R"({"b1": 900, "b2": 100})";
  CHECK_THROWS_AS(load_policy(dir / "bad.json"), ValidationError);
}

TEST_CASE("calibration goldens") {
  const std::vector<std::int64_t> grid = {256, 512, 1024, 2048};
  const Scores staircase = {
      {256, {{"lead", 0.5}, {"mmr", 0.3}, {"rcd", 0.2}}},
      {512, {{"lead", 0.5}, {"mmr", 0.4}, {"rcd", 0.3}}},
      {1024, {{"lead", 0.4}, {"mmr", 0.6}, {"rcd", 0.5}}},
      {2048, {{"lead", 0.4}, {"mmr", 0.5}, {"rcd", 0.7}}},
      {4096, {{"lead", 0.4}, {"mmr", 0.5}, {"rcd", 0.8}}},
  };
  const auto p = calibrate_thresholds(sweep_from(staircase), grid);
  CHECK(p.b1 == 512);
  CHECK(p.b2 == 1024);

  Scores lead_wins = staircase;
  for (auto& [b, m] : lead_wins) m["lead"] = 0.9;
  const auto l = calibrate_thresholds(sweep_from(lead_wins), grid);
  CHECK(l.b1 == 2048);
  CHECK(l.b2 == kUnboundedBudget);
  for (std::int64_t b : grid) CHECK(route(b, l) == Method::kLead);

  Scores flat = staircase;
  for (auto& [b, m] : flat) m = {{"lead", 0.3}, {"mmr", 0.3}, {"rcd", 0.3}};
  const auto t = calibrate_thresholds(sweep_from(flat), grid);
  CHECK(t.b1 == 256);
  CHECK(t.b2 == 512);
}

TEST_CASE("calibrated pair beats every other grid pair") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::int64_t> grid = {128, 256, 512, 1024, 2048};
  for (int trial = 0; trial < 100; ++trial) {
    Scores s;
    for (std::int64_t b : {128, 256, 512, 1024, 2048, 4096}) {
      // Coarse values so that ties actually happen.
      for (const char* m : {"lead", "mmr", "rcd"}) s[b][m] = 0.1 * std::floor(u(rng) * 5);
    }
    const auto p = calibrate_thresholds(sweep_from(s), grid);
    const double got = pair_score(s, p.b1, p.b2);
    std::vector<std::int64_t> upper(grid);
    upper.push_back(kUnboundedBudget);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < upper.size(); ++j) {
        const double other = pair_score(s, grid[i], upper[j]);
        CHECK(got >= other - 1e-12);
        if (std::abs(got - other) <= 1e-12) {
          // Ties resolve to the lexicographically smallest pair.
          CHECK(std::make_pair(p.b1, p.b2) <= std::make_pair(grid[i], upper[j]));
        }
      }
    }
  }
}

TEST_CASE("calibration errors") {
  const Scores partial = {{256, {{"lead", 0.5}, {"mmr", 0.3}}}, {512, {{"lead", 0.5}}}};
  const std::vector<std::int64_t> grid = {256, 512};
  CHECK_THROWS_AS(calibrate_thresholds(sweep_from(partial), grid), IncompleteSweepError);
  try {
    calibrate_thresholds(sweep_from(partial), grid);
  } catch (const IncompleteSweepError& e) {
    CHECK(std::string(e.what()).find("rcd") != std::string::npos);
  }
  const std::vector<std::int64_t> single = {512};
  CHECK_THROWS_AS(calibrate_thresholds(sweep_from(partial), single), ValidationError);
  CHECK_THROWS_AS(calibrate_thresholds(sweep_from(partial), grid, "bleu"), UnknownMetricError);
}

TEST_CASE("oracle bounds sandwich the routed curve") {
  const Scores two = {{256, {{"lead", 0.2}, {"mmr", 0.3}}}};
  const auto b = oracle_bounds(sweep_from(two));
  REQUIRE(b.size() == 1);
  CHECK(b[0].upper == doctest::Approx(0.3));
  CHECK(b[0].lower == doctest::Approx(0.2));

  const Scores one = {{256, {{"lead", 0.2}}}, {512, {{"lead", 0.6}}}};
  for (const auto& o : oracle_bounds(sweep_from(one))) CHECK(o.upper == o.lower);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Scores s;
    for (std::int64_t b : {128, 512, 1024, 4096}) {
      for (const char* m : {"lead", "mmr", "rcd", "sliding"}) s[b][m] = u(rng);
    }
    const auto sweep = sweep_from(s);
    const RouterPolicy p{static_cast<std::int64_t>(100 + rng() % 1000), 2000};
    const auto bounds = oracle_bounds(sweep);
    const auto routed = routed_curve(sweep, p);
    REQUIRE(routed.size() == bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      CHECK(routed[i].first == bounds[i].budget);
      CHECK(routed[i].second >= bounds[i].lower - 1e-12);
      CHECK(routed[i].second <= bounds[i].upper + 1e-12);
    }
  }
  CHECK_THROWS_AS(oracle_bounds(EvalReport{}), IncompleteSweepError);
}
