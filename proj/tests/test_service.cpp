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


#include <string>
#include <vector>

#include "doctest.h"

#include "budgetctx/error.hpp"
#include "budgetctx/metrics.hpp"
#include "budgetctx/pipeline.hpp"
#include "budgetctx/service.hpp"
#include "stub_server.hpp"

using namespace budgetctx;

namespace {

ServiceEndpoint endpoint(const std::string& url, int retries = 0) {
  ServiceEndpoint e;
  e.url = url;
  e.retries = retries;
  e.timeout_s = 5.0;
  return e;
}

// Nothing listens on the discard port in the test sandbox.
const char* kUnreachable = "http://127.0.0.1:9/embed";

}  // namespace

TEST_CASE("service embedder") {
  StubServer stub;
  const ServiceEmbedder e(endpoint(stub.url("/embed")), 8);
  const std::vector<std::string> texts = {"renal failure", "renal failure", "sepsis"};
  const Matrix m = e.embed(texts);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 8);
  CHECK(m.row(0) == m.row(1));
  CHECK(m.row(0) != m.row(2));

  const ServiceEmbedder wrong_dim(endpoint(stub.url("/embed")), 16);
  CHECK_THROWS_AS(wrong_dim.embed(texts), DimensionMismatchError);
  const ServiceEmbedder short_reply(endpoint(stub.url("/embed-short")), 8);
  CHECK_THROWS_AS(short_reply.embed(texts), DimensionMismatchError);
  CHECK_THROWS_AS(ServiceEmbedder(endpoint(stub.url("/embed")), 0), ValidationError);
}

TEST_CASE("service embeddings drive the feature pipeline") {
  StubServer stub;
  EmbedderConfig cfg;
  cfg.kind = EmbedderKind::kExternalService;
  cfg.dimension = 8;
  cfg.config = {{"endpoint", stub.url("/embed")}, {"retries", "0"}};
  const auto e = make_embedder(cfg);
  const Document doc{"d", "Fever began Monday. Cultures grew nothing. Fever resolved.",
                     std::nullopt, std::nullopt};
  const auto p = prepare_document(doc, TokenCounter(), {}, *e);
  CHECK(p.units.size() == 3);
  CHECK(p.features.kernel.rows() == 3);
  const auto r = select_context(p, Method::kRcd, 6);
  CHECK(r.total_cost <= 6);

  cfg.config.erase("endpoint");
  CHECK_THROWS_AS(make_embedder(cfg), ValidationError);
}

TEST_CASE("generation echo oracle") {
  StubServer stub;
  const GenerationClient client(endpoint(stub.url("/generate")), "stub-model", "{context}", 64);
  const std::string context = "Patient admitted with pneumonia and treated with antibiotics.";
  const auto out = client.generate(context);
  CHECK(out.text == context);
  CHECK(rouge1(out.text, context).f1 == 1.0);
  CHECK(out.prompt_tokens == 8);
  CHECK(out.completion_tokens == 8);
  const auto sent = nlohmann::json::parse(stub.last_body);
  CHECK(sent["model"] == "stub-model");
  CHECK(sent["max_tokens"] == 64);

  const GenerationClient plain(endpoint(stub.url("/generate-nousage")), "m", "{context}");
  const auto bare = plain.generate("short note");
  CHECK(bare.text == "short note");
  CHECK(!bare.prompt_tokens);

  const GenerationClient templated(endpoint(stub.url("/generate")), "m");
  CHECK(templated.render_prompt("X") ==
        "Summarize the following clinical context:\n\nX\n\nSummary:");
}

TEST_CASE("prompt template validation") {
  const auto e = endpoint("http://127.0.0.1:9/g");
  CHECK_THROWS_AS(GenerationClient(e, "m", "no placeholder"), ValidationError);
  CHECK_THROWS_AS(GenerationClient(e, "m", "{context} {context}"), ValidationError);
  CHECK_THROWS_AS(GenerationClient(e, "m", "{context}", 0), ValidationError);
  CHECK_THROWS_AS(GenerationClient(endpoint("ftp://host/x"), "m"), ValidationError);
}

TEST_CASE("retries, status errors and transport errors") {
  StubServer stub;
  const GenerationClient flaky(endpoint(stub.url("/flaky"), 1), "m", "{context}");
  CHECK(flaky.generate("again").text == "again");
  CHECK(stub.flaky_calls == 2);

  const GenerationClient down(endpoint(stub.url("/down"), 2), "m", "{context}");
  try {
    down.generate("x");
    FAIL("expected an HTTP status error");
  } catch (const HttpStatusError& e) {
    CHECK(e.status() == 500);
    CHECK(std::string(e.what()).find("internal failure") != std::string::npos);
  }
  CHECK(stub.down_calls == 3);

  const GenerationClient garbage(endpoint(stub.url("/garbage")), "m", "{context}");
  CHECK_THROWS_AS(garbage.generate("x"), ServiceError);

  auto locked = endpoint(stub.url("/private"));
  CHECK_THROWS_AS(GenerationClient(locked, "m", "{context}").generate("x"), HttpStatusError);
  locked.api_key = "sesame";
  CHECK(GenerationClient(locked, "m", "{context}").generate("x").text == "welcome");

  const ServiceEmbedder unreachable(endpoint(kUnreachable, 1), 8);
  const std::vector<std::string> texts = {"a"};
  CHECK_THROWS_AS(unreachable.embed(texts), TransportError);
}
