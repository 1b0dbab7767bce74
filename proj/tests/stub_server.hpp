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


#ifndef BUDGETCTX_TESTS_STUB_SERVER_HPP_
#define BUDGETCTX_TESTS_STUB_SERVER_HPP_

#include <atomic>
#include <cstdint>
#include <sstream>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"

// Local HTTP stand-in for the embedding and generation services.
//   /embed      {"texts": [...]} -> {"vectors": [...]}, 8 nonnegative dims
//   /embed-short  one vector too few
//   /generate   echoes the prompt, with usage counts in words
//   /generate-nousage  echoes via choices[0].message.content, no usage
//   /flaky      503 on the first call, then behaves like /generate
//   /down       always 500
//   /garbage    200 with a non-JSON body
//   /private    401 unless "Authorization: Bearer sesame"
class StubServer {
 public:
  StubServer() {
    using nlohmann::json;
    server_.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
      res.set_content(embed_reply(json::parse(req.body), 0).dump(), "application/json");
    });
    server_.Post("/embed-short", [](const httplib::Request& req, httplib::Response& res) {
      res.set_content(embed_reply(json::parse(req.body), 1).dump(), "application/json");
    });
    server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) {
      ++generate_calls;
      last_body = req.body;
      res.set_content(echo(json::parse(req.body), true).dump(), "application/json");
    });
    server_.Post("/generate-nousage", [](const httplib::Request& req, httplib::Response& res) {
      res.set_content(echo(json::parse(req.body), false).dump(), "application/json");
    });
    server_.Post("/flaky", [this](const httplib::Request& req, httplib::Response& res) {
      if (flaky_calls++ == 0) {
        res.status = 503;
        res.set_content("warming up", "text/plain");
        return;
      }
      res.set_content(echo(json::parse(req.body), true).dump(), "application/json");
    });
    server_.Post("/down", [this](const httplib::Request&, httplib::Response& res) {
      ++down_calls;
      res.status = 500;
      res.set_content("internal failure", "text/plain");
    });
    server_.Post("/garbage", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("<html>not json</html>", "text/html");
    });
    server_.Post("/private", [](const httplib::Request& req, httplib::Response& res) {
      if (req.get_header_value("Authorization") != "Bearer sesame") {
        res.status = 401;
        res.set_content("{\"error\":\"unauthorized\"}", "application/json");
        return;
      }
      res.set_content("{\"text\":\"welcome\"}", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::atomic<int> generate_calls{0};
  std::atomic<int> flaky_calls{0};
  std::atomic<int> down_calls{0};
  std::string last_body;

 private:
  static nlohmann::json embed_reply(const nlohmann::json& body, std::size_t drop) {
    nlohmann::json vectors = nlohmann::json::array();
    const auto& texts = body.at("texts");
    for (std::size_t i = 0; i + drop < texts.size(); ++i) {
      const std::string t = texts[i].get<std::string>();
      nlohmann::json v = nlohmann::json::array();
      for (int k = 0; k < 8; ++k) {
        std::uint64_t h = 1469598103934665603ull + static_cast<std::uint64_t>(k);
        for (unsigned char c : t) h = (h ^ c) * 1099511628211ull;
        v.push_back(static_cast<double>(h % 1000) / 1000.0 + 0.001);
      }
      vectors.push_back(v);
    }
    return {{"vectors", vectors}};
  }

  static std::int64_t words(const std::string& s) {
    std::istringstream in(s);
    std::string w;
    std::int64_t n = 0;
    while (in >> w) ++n;
    return n;
  }

  static nlohmann::json echo(const nlohmann::json& body, bool usage) {
    const std::string prompt = body.at("prompt").get<std::string>();
    if (!usage) {
      return {{"choices", {{{"message", {{"content", prompt}}}}}}};
    }
    return {{"choices", {{{"text", prompt}}}},
            {"usage", {{"prompt_tokens", words(prompt)}, {"completion_tokens", words(prompt)}}}};
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

#endif  // BUDGETCTX_TESTS_STUB_SERVER_HPP_
