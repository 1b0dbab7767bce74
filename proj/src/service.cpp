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


#include "budgetctx/service.hpp"

#include <chrono>
#include <thread>
#include <utility>

#include "httplib.h"

#include "budgetctx/error.hpp"

namespace budgetctx {
namespace {

using nlohmann::json;

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl parse_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ValidationError("endpoint URL needs a scheme: '" + url + "'");
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ValidationError("unsupported endpoint scheme '" + scheme + "'");
  }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") {
    throw ValidationError("this build has no TLS support; use an http endpoint");
  }
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  ParsedUrl p;
  p.origin = url.substr(0, path_start);
  p.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (p.origin.size() <= scheme_end + 3) {
    throw ValidationError("endpoint URL has no host: '" + url + "'");
  }
  return p;
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 200;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

}  // namespace

json post_json(const ServiceEndpoint& endpoint, const json& body) {
  const ParsedUrl url = parse_url(endpoint.url);
  if (!(endpoint.timeout_s > 0.0)) throw ValidationError("timeout must be positive");
  if (endpoint.retries < 0) throw ValidationError("retries must be >= 0");

  httplib::Client client(url.origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(endpoint.timeout_s));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!endpoint.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.api_key);
  }
  const std::string payload = body.dump();

  std::string last_error;
  for (int attempt = 0; attempt <= endpoint.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100 << (attempt - 1)));
    }
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (!res) {
      last_error = "request to " + endpoint.url +
                   " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status) + " from " + endpoint.url;
      if (attempt == endpoint.retries) {
        throw HttpStatusError(last_error + ": " + excerpt(res->body), res->status);
      }
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw HttpStatusError("HTTP " + std::to_string(res->status) + " from " +
                                endpoint.url + ": " + excerpt(res->body),
                            res->status);
    }
    try {
      return json::parse(res->body);
    } catch (const json::parse_error&) {
      throw ServiceError("unparseable reply from " + endpoint.url + ": " +
                         excerpt(res->body));
    }
  }
  throw TransportError(last_error);
}

ServiceEmbedder::ServiceEmbedder(ServiceEndpoint endpoint, int dimension)
    : endpoint_(std::move(endpoint)), dimension_(dimension) {
  if (dimension <= 0) throw ValidationError("embedding dimension must be positive");
  if (endpoint_.max_in_flight <= 0) {
    throw ValidationError("max_in_flight must be positive");
  }
  parse_url(endpoint_.url);
  in_flight_ = std::make_shared<std::counting_semaphore<>>(endpoint_.max_in_flight);
}

Matrix ServiceEmbedder::embed(std::span<const std::string> texts) const {
  const json body = {{"texts", json(std::vector<std::string>(texts.begin(), texts.end()))}};
  json reply;
  in_flight_->acquire();
  try {
    reply = post_json(endpoint_, body);
  } catch (...) {
    in_flight_->release();
    throw;
  }
  in_flight_->release();

  if (!reply.is_object() || !reply.contains("vectors") || !reply["vectors"].is_array()) {
    throw ServiceError("embedding reply lacks a \"vectors\" array");
  }
  const auto& vectors = reply["vectors"];
  if (vectors.size() != texts.size()) {
    throw DimensionMismatchError("embedding service returned " +
                                 std::to_string(vectors.size()) + " vectors for " +
                                 std::to_string(texts.size()) + " texts");
  }
  Matrix out(static_cast<Eigen::Index>(texts.size()), dimension_);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (!v.is_array() || v.size() != static_cast<std::size_t>(dimension_)) {
      throw DimensionMismatchError("embedding " + std::to_string(i) + " has " +
                                   std::to_string(v.is_array() ? v.size() : 0) +
                                   " components, expected " +
                                   std::to_string(dimension_));
    }
    for (int k = 0; k < dimension_; ++k) {
      if (!v[k].is_number()) throw ServiceError("non-numeric embedding component");
      out(static_cast<Eigen::Index>(i), k) = v[k].get<double>();
    }
  }
  return out;
}

GenerationClient::GenerationClient(ServiceEndpoint endpoint, std::string model,
                                   std::string prompt_template,
                                   std::int64_t max_output_tokens)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      template_(std::move(prompt_template)),
      max_output_tokens_(max_output_tokens) {
  const auto first = template_.find(kContextPlaceholder);
  if (first == std::string::npos ||
      template_.find(kContextPlaceholder, first + 1) != std::string::npos) {
    throw ValidationError("prompt template must contain exactly one {context}");
  }
  if (max_output_tokens_ <= 0) throw ValidationError("max output tokens must be positive");
  parse_url(endpoint_.url);
}

std::string GenerationClient::render_prompt(const std::string& context) const {
  std::string out = template_;
  out.replace(out.find(kContextPlaceholder), std::string_view(kContextPlaceholder).size(),
              context);
  return out;
}

GenerationOutput GenerationClient::generate(const std::string& context) const {
  const json body = {{"model", model_},
                     {"prompt", render_prompt(context)},
                     {"max_tokens", max_output_tokens_}};
  const json reply = post_json(endpoint_, body);
  GenerationOutput out;
  try {
    if (reply.contains("text")) {
      out.text = reply["text"].get<std::string>();
    } else if (reply.contains("choices") && !reply["choices"].empty()) {
      const auto& choice = reply["choices"][0];
      if (choice.contains("text")) {
        out.text = choice["text"].get<std::string>();
      } else {
        out.text = choice.at("message").at("content").get<std::string>();
      }
    } else {
      throw ServiceError("generation reply has no text");
    }
    if (reply.contains("usage") && reply["usage"].is_object()) {
      const auto& usage = reply["usage"];
      if (usage.contains("prompt_tokens")) {
        out.prompt_tokens = usage["prompt_tokens"].get<std::int64_t>();
      }
      if (usage.contains("completion_tokens")) {
        out.completion_tokens = usage["completion_tokens"].get<std::int64_t>();
      }
    }
  } catch (const json::exception& e) {
    throw ServiceError(std::string("malformed generation reply: ") + e.what());
  }
  return out;
}

}  // namespace budgetctx
