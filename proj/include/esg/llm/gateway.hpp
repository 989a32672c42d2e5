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
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esg/llm/provider.hpp"
#include "esg/llm/types.hpp"

namespace esg::llm {

struct RoleBinding {
  std::string provider_id;
  std::string model;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

// Routes logical roles ("main", "deep_researcher", "judge:0", ...) to
// provider+model pairs, retries transient failures and keeps per-role usage.
// Thread-safe.
class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  explicit Gateway(RetryPolicy retry = {});

  void add_provider(std::shared_ptr<ChatProvider> provider);
  void bind_role(const std::string& role, RoleBinding binding);
  void set_embedder(std::shared_ptr<Embedder> embedder);
  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

  bool has_role(std::string_view role) const;
  std::vector<std::string> roles() const;
  const RetryPolicy& retry_policy() const { return retry_; }

  ChatResponse complete(const ChatRequest& request);
  std::vector<Embedding> embed(const std::vector<std::string>& texts);
  std::size_t embedding_dimension() const;

  Usage usage_total(std::optional<std::string_view> role_filter = std::nullopt) const;
  std::size_t call_count(std::optional<std::string_view> role_filter = std::nullopt) const;

 private:
  RetryPolicy retry_;
  Sleeper sleeper_;
  std::map<std::string, std::shared_ptr<ChatProvider>> providers_;
  std::map<std::string, RoleBinding, std::less<>> roles_;
  std::shared_ptr<Embedder> embedder_;

  mutable std::mutex usage_mu_;
  std::map<std::string, Usage, std::less<>> usage_;
  std::map<std::string, std::size_t, std::less<>> calls_;
};

}  // namespace esg::llm
