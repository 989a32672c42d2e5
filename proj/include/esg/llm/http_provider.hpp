// Copyright 2026 The ESG Agent Authors.
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

#pragma once

#include <chrono>
#include <string>

#include "esg/llm/provider.hpp"

namespace esg::llm {

struct HttpEndpoint {
  std::string id;
  std::string base_url;          // e.g. "https://api.openai.com" or "http://127.0.0.1:8080"
  std::string chat_path = "/v1/chat/completions";
  std::string embed_path = "/v1/embeddings";
  std::string api_key_env;       // empty: no Authorization header
  std::chrono::seconds timeout{120};
};

// OpenAI-compatible chat completions over HTTP(S). Connection failures, 429
// and 5xx are reported as TransientError for the gateway's retry loop.
class HttpChatProvider final : public ChatProvider {
 public:
  explicit HttpChatProvider(HttpEndpoint endpoint);

  std::string id() const override { return endpoint_.id; }
  ChatResponse chat(const ChatRequest& request, const std::string& model) override;

 private:
  HttpEndpoint endpoint_;
};

class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(HttpEndpoint endpoint, std::string model, std::size_t dimension);

  std::size_t dimension() const override { return dimension_; }
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
  std::size_t dimension_;
};

}  // namespace esg::llm
