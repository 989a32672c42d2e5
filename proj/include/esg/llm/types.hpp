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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esg::llm {

enum class Role { kSystem, kUser, kAssistant, kTool };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
  std::optional<std::string> tool_name;

  static ChatMessage system(std::string content);
  static ChatMessage user(std::string content);
  static ChatMessage assistant(std::string content);
  static ChatMessage tool(std::string name, std::string content);

  // Throws ArgValidation when the role/content/tool_name invariants fail.
  void validate() const;
};

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  Usage& operator+=(const Usage& other) {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    return *this;
  }
  friend Usage operator+(Usage a, const Usage& b) { return a += b; }
  friend bool operator==(const Usage&, const Usage&) = default;
};

struct ChatRequest {
  std::string model_role;
  std::vector<ChatMessage> messages;
  double temperature = 0.7;
  int max_output_tokens = 4096;
};

struct ChatResponse {
  std::string content;
  Usage usage;
  std::string provider_id;
  std::int64_t latency_ms = 0;
};

using Embedding = std::vector<double>;

// 0.0 for judging/grading roles, 0.7 for generative ones.
double default_temperature(std::string_view role);

double cosine(const Embedding& a, const Embedding& b);

}  // namespace esg::llm
