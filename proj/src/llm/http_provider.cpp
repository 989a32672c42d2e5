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

#include "esg/llm/http_provider.hpp"

#include <httplib.h>

#include <cstdlib>

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"

namespace esg::llm {

namespace {

httplib::Headers auth_headers(const HttpEndpoint& ep) {
  httplib::Headers headers;
  if (!ep.api_key_env.empty()) {
    const char* key = std::getenv(ep.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorKind::kProviderError,
                  "environment variable " + ep.api_key_env + " is not set for " + ep.id);
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  return headers;
}

Json post_json(const HttpEndpoint& ep, const std::string& path, const Json& body) {
  httplib::Client client(ep.base_url);
  client.set_connection_timeout(ep.timeout);
  client.set_read_timeout(ep.timeout);
  client.set_write_timeout(ep.timeout);
  auto res = client.Post(path, auth_headers(ep), dump_line(body), "application/json");
  if (!res) {
    throw TransientError(ep.id + ": transport error " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw TransientError(ep.id + ": HTTP " + std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorKind::kProviderError,
                ep.id + ": HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  auto j = Json::parse(res->body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorKind::kProviderError, ep.id + ": response is not JSON");
  return j;
}

}  // namespace

HttpChatProvider::HttpChatProvider(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

ChatResponse HttpChatProvider::chat(const ChatRequest& request, const std::string& model) {
  const auto started = std::chrono::steady_clock::now();
  Json messages = Json::array();
  for (const auto& m : request.messages) {
    // Tool outputs travel as user turns; no provider function-calling wire format.
    if (m.role == Role::kTool) {
      messages.push_back({{"role", "user"},
                          {"content", "Tool " + m.tool_name.value_or("?") + " output:\n" + m.content}});
    } else {
      messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
    }
  }
  Json body = {{"model", model},
               {"messages", messages},
               {"temperature", request.temperature},
               {"max_tokens", request.max_output_tokens}};
  const Json reply = post_json(endpoint_, endpoint_.chat_path, body);
  ChatResponse out;
  try {
    out.content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
    if (reply.contains("usage")) {
      out.usage.prompt_tokens = reply["usage"].value("prompt_tokens", std::int64_t{0});
      out.usage.completion_tokens = reply["usage"].value("completion_tokens", std::int64_t{0});
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kProviderError, endpoint_.id + ": unexpected response shape: " + e.what());
  }
  out.provider_id = endpoint_.id;
  out.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
  return out;
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint, std::string model, std::size_t dimension)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), dimension_(dimension) {}

std::vector<Embedding> HttpEmbedder::embed(const std::vector<std::string>& texts) {
  const Json reply = post_json(endpoint_, endpoint_.embed_path, {{"model", model_}, {"input", texts}});
  std::vector<Embedding> out(texts.size());
  try {
    for (const auto& item : reply.at("data")) {
      const auto idx = item.value("index", std::size_t{0});
      if (idx >= out.size()) continue;
      out[idx] = item.at("embedding").get<Embedding>();
      if (out[idx].size() != dimension_) {
        throw Error(ErrorKind::kProviderError, endpoint_.id + ": embedding dimension mismatch");
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kProviderError, endpoint_.id + ": unexpected embedding response: " + e.what());
  }
  for (const auto& v : out) {
    if (v.empty()) throw Error(ErrorKind::kProviderError, endpoint_.id + ": missing embedding");
  }
  return out;
}

}  // namespace esg::llm
