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

#include "esg/llm/gateway.hpp"

#include <thread>

#include "esg/common/error.hpp"

namespace esg::llm {

Gateway::Gateway(RetryPolicy retry)
    : retry_(retry),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }),
      embedder_(std::make_shared<StubEmbedder>()) {}

void Gateway::add_provider(std::shared_ptr<ChatProvider> provider) {
  const auto id = provider->id();
  providers_[id] = std::move(provider);
}

void Gateway::bind_role(const std::string& role, RoleBinding binding) {
  roles_[role] = std::move(binding);
}

void Gateway::set_embedder(std::shared_ptr<Embedder> embedder) { embedder_ = std::move(embedder); }

bool Gateway::has_role(std::string_view role) const { return roles_.find(role) != roles_.end(); }

std::vector<std::string> Gateway::roles() const {
  std::vector<std::string> out;
  for (const auto& [role, _] : roles_) out.push_back(role);
  return out;
}

ChatResponse Gateway::complete(const ChatRequest& request) {
  const auto role_it = roles_.find(request.model_role);
  if (role_it == roles_.end()) {
    throw Error(ErrorKind::kUnknownRole, "model role not configured: " + request.model_role);
  }
  const auto provider_it = providers_.find(role_it->second.provider_id);
  if (provider_it == providers_.end()) {
    throw Error(ErrorKind::kUnknownRole, "role " + request.model_role + " names unknown provider " +
                                             role_it->second.provider_id);
  }
  if (request.messages.empty()) throw Error(ErrorKind::kArgValidation, "request has no messages");
  for (const auto& m : request.messages) m.validate();
  if (request.temperature < 0.0 || request.temperature > 2.0) {
    throw Error(ErrorKind::kArgValidation, "temperature outside [0,2]");
  }
  if (request.max_output_tokens <= 0) {
    throw Error(ErrorKind::kArgValidation, "max_output_tokens must be positive");
  }

  auto backoff = retry_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    try {
      ChatResponse response = provider_it->second->chat(request, role_it->second.model);
      if (response.usage.prompt_tokens < 0 || response.usage.completion_tokens < 0) {
        throw Error(ErrorKind::kProviderError, "provider reported negative usage");
      }
      std::lock_guard lock(usage_mu_);
      usage_[request.model_role] += response.usage;
      ++calls_[request.model_role];
      return response;
    } catch (const TransientError& e) {
      last_error = e.what();
      if (attempt < retry_.max_attempts) {
        sleeper_(backoff);
        backoff = std::chrono::milliseconds(
            static_cast<std::int64_t>(static_cast<double>(backoff.count()) * retry_.multiplier));
      }
    }
  }
  throw Error(ErrorKind::kProviderError, "retries exhausted for role " + request.model_role +
                                             ": " + last_error);
}

std::vector<Embedding> Gateway::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw Error(ErrorKind::kEmptyInput, "embed called with no texts");
  for (const auto& t : texts) {
    if (t.empty()) throw Error(ErrorKind::kEmptyInput, "embed called with an empty text");
  }
  auto backoff = retry_.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return embedder_->embed(texts);
    } catch (const TransientError& e) {
      if (attempt >= retry_.max_attempts) {
        throw Error(ErrorKind::kProviderError, std::string("embedding retries exhausted: ") + e.what());
      }
      sleeper_(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<std::int64_t>(static_cast<double>(backoff.count()) * retry_.multiplier));
    }
  }
}

std::size_t Gateway::embedding_dimension() const { return embedder_->dimension(); }

Usage Gateway::usage_total(std::optional<std::string_view> role_filter) const {
  std::lock_guard lock(usage_mu_);
  Usage total;
  for (const auto& [role, u] : usage_) {
    if (!role_filter || role == *role_filter) total += u;
  }
  return total;
}

std::size_t Gateway::call_count(std::optional<std::string_view> role_filter) const {
  std::lock_guard lock(usage_mu_);
  std::size_t total = 0;
  for (const auto& [role, n] : calls_) {
    if (!role_filter || role == *role_filter) total += n;
  }
  return total;
}

}  // namespace esg::llm
