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

// HTTP clients for optional external embedding and generation services.
//
// Embedding:  POST {"texts": [...]}                 -> {"vectors": [[...], ...]}
// Generation: POST {"model", "prompt", "max_tokens"} -> {"text": ...} or an
//             OpenAI-style {"choices": [{"text" | "message": {"content"}}]}

#ifndef BUDGETCTX_SERVICE_HPP_
#define BUDGETCTX_SERVICE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <semaphore>
#include <span>
#include <string>

#include "json.hpp"

#include "budgetctx/features.hpp"

namespace budgetctx {

struct ServiceEndpoint {
  std::string url;  // http[s]://host[:port]/path
  std::string api_key;
  double timeout_s = 30.0;
  int retries = 2;
  // Concurrent requests allowed per client.
  int max_in_flight = 4;
};

// POSTs a JSON body and parses a JSON reply. Retries transport failures and
// 5xx replies. Throws TransportError, HttpStatusError (with a body excerpt)
// or ServiceError for an unparseable reply; ValidationError for a bad URL.
nlohmann::json post_json(const ServiceEndpoint& endpoint,
                         const nlohmann::json& body);

class ServiceEmbedder final : public Embedder {
 public:
  ServiceEmbedder(ServiceEndpoint endpoint, int dimension);

  // Throws DimensionMismatchError when the reply has the wrong shape.
  Matrix embed(std::span<const std::string> texts) const override;
  int dimension() const override { return dimension_; }

 private:
  ServiceEndpoint endpoint_;
  int dimension_;
  std::shared_ptr<std::counting_semaphore<>> in_flight_;
};

inline constexpr char kContextPlaceholder[] = "{context}";
inline constexpr char kDefaultPromptTemplate[] =
    "Summarize the following clinical context:\n\n{context}\n\nSummary:";

struct GenerationOutput {
  std::string text;
  std::optional<std::int64_t> prompt_tokens;
  std::optional<std::int64_t> completion_tokens;
};

class GenerationClient {
 public:
  // Throws ValidationError unless the template holds exactly one
  // placeholder.
  GenerationClient(ServiceEndpoint endpoint, std::string model,
                   std::string prompt_template = kDefaultPromptTemplate,
                   std::int64_t max_output_tokens = 512);

  std::string render_prompt(const std::string& context) const;
  GenerationOutput generate(const std::string& context) const;

  const std::string& model() const { return model_; }
  std::int64_t max_output_tokens() const { return max_output_tokens_; }

 private:
  ServiceEndpoint endpoint_;
  std::string model_;
  std::string template_;
  std::int64_t max_output_tokens_;
};

}  // namespace budgetctx

#endif  // BUDGETCTX_SERVICE_HPP_
