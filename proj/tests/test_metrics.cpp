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


#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "budgetctx/error.hpp"
#include "budgetctx/features.hpp"
#include "budgetctx/metrics.hpp"

using namespace budgetctx;

namespace {

// Independent ROUGE-N: sorted n-gram lists intersected with std::set_intersection.
double rouge_oracle_f1(const std::vector<std::string>& c, const std::vector<std::string>& r,
                       std::size_t n) {
  auto grams = [n](const std::vector<std::string>& t) {
    std::vector<std::vector<std::string>> g;
    for (std::size_t i = 0; i + n <= t.size(); ++i) g.emplace_back(t.begin() + i, t.begin() + i + n);
    std::sort(g.begin(), g.end());
    return g;
  };
  const auto gc = grams(c), gr = grams(r);
  if (gc.empty() || gr.empty()) return 0.0;
  std::vector<std::vector<std::string>> common;
  std::set_intersection(gc.begin(), gc.end(), gr.begin(), gr.end(), std::back_inserter(common));
  const double p = static_cast<double>(common.size()) / gc.size();
  const double rec = static_cast<double>(common.size()) / gr.size();
  return p + rec > 0 ? 2 * p * rec / (p + rec) : 0.0;
}

std::string join(const std::vector<std::string>& t) {
  std::string s;
  for (const auto& w : t) s += (s.empty() ? "" : " ") + w;
  return s;
}

}  // namespace

TEST_CASE("rouge goldens") {
  const auto a = rouge1("a b", "a c");
  CHECK(a.precision == 0.5);
  CHECK(a.recall == 0.5);
  CHECK(a.f1 == 0.5);

  const auto m = rouge1("a a b", "a b b");
  CHECK(m.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto b = rouge2("a b c", "b c d");
  CHECK(b.precision == 0.5);
  CHECK(b.recall == 0.5);
  CHECK(b.f1 == 0.5);

  CHECK(rouge1("the plan", "the plan").f1 == 1.0);
  CHECK(rouge2("the plan", "the plan").f1 == 1.0);
  CHECK(rouge1("alpha beta", "gamma delta").f1 == 0.0);
  CHECK(rouge2("alpha", "alpha beta").f1 == 0.0);
  CHECK(rouge1("", "x").f1 == 0.0);
  CHECK(rouge1("x", "").recall == 0.0);
  CHECK(token_f1("a a b", "a b b").f1 == rouge1("a a b", "a b b").f1);
  CHECK_THROWS_AS(rouge_n("a", "a", 0), ValidationError);
}

TEST_CASE("rouge normalizes case and punctuation") {
  CHECK(rouge1("The Patient, stable.", "the patient stable").f1 == 1.0);
  CHECK(rouge2("Fever; RESOLVED!", "fever resolved").f1 == 1.0);
}

TEST_CASE("rouge agrees with the intersection oracle and is symmetric in f1") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> c(rng() % 12), r(rng() % 12);
    for (auto& w : c) w = vocab[rng() % vocab.size()];
    for (auto& w : r) w = vocab[rng() % vocab.size()];
    const auto cs = join(c), rs = join(r);
    for (int n : {1, 2}) {
      const double f = rouge_n(cs, rs, n).f1;
      CHECK(f == doctest::Approx(rouge_oracle_f1(c, r, n)).epsilon(1e-12));
      CHECK(f == doctest::Approx(rouge_n(rs, cs, n).f1).epsilon(1e-12));
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }
  }
}

TEST_CASE("soft embedding f1") {
  const HashedTfidfEmbedder e(4096);
  const auto same = soft_embed_f1("renal function improved", "renal function improved", e);
  CHECK(same.precision == doctest::Approx(1.0));
  CHECK(same.recall == doctest::Approx(1.0));
  CHECK(soft_embed_f1("alpha", "omega", e).f1 == doctest::Approx(0.0));

  const std::vector<std::string> pair = {"alpha", "beta"};
  const Matrix rows = e.embed(pair);
  REQUIRE(rows.row(0).dot(rows.row(1)) == 0.0);  // no hash collision
  const auto half = soft_embed_f1("alpha", "alpha beta", e);
  CHECK(half.precision == doctest::Approx(1.0));
  CHECK(half.recall == doctest::Approx(0.5));
  CHECK(half.f1 == doctest::Approx(2.0 / 3.0));
  CHECK(soft_embed_f1("", "alpha", e).f1 == 0.0);
}

TEST_CASE("cost estimate") {
  CHECK(estimate_cost(100, 50, {1e6, 1e6}) == 150.0);
  CHECK(estimate_cost(0, 0, {3.0, 7.0}) == 0.0);
  CHECK(estimate_cost(1000000, 0, {2.0, 0.0}) == 2.0);
  const PriceSchedule p{2.5, 10.0};
  CHECK(estimate_cost(300, 40, p) ==
        doctest::Approx(estimate_cost(300, 0, p) + estimate_cost(0, 40, p)));
  CHECK(estimate_cost(600, 80, p) == doctest::Approx(2 * estimate_cost(300, 40, p)));
  CHECK_THROWS_AS(estimate_cost(-1, 0, p), ValidationError);
  CHECK_THROWS_AS(estimate_cost(1, 0, {-1.0, 0.0}), ValidationError);
}
