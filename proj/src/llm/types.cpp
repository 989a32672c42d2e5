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

#include "esg/llm/types.hpp"

#include <cmath>

#include "esg/common/error.hpp"

namespace esg::llm {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
    case Role::kTool: return "tool";
  }
  return "user";
}

ChatMessage ChatMessage::system(std::string content) {
  return {Role::kSystem, std::move(content), std::nullopt};
}
ChatMessage ChatMessage::user(std::string content) {
  return {Role::kUser, std::move(content), std::nullopt};
}
ChatMessage ChatMessage::assistant(std::string content) {
  return {Role::kAssistant, std::move(content), std::nullopt};
}
ChatMessage ChatMessage::tool(std::string name, std::string content) {
  return {Role::kTool, std::move(content), std::move(name)};
}

void ChatMessage::validate() const {
  if ((role == Role::kSystem || role == Role::kUser) && content.empty()) {
    throw Error(ErrorKind::kArgValidation,
                std::string(to_string(role)) + " message content must be non-empty");
  }
  if ((role == Role::kTool) != tool_name.has_value()) {
    throw Error(ErrorKind::kArgValidation, "tool_name must be present iff role is tool");
  }
}

double default_temperature(std::string_view role) {
  if (role.starts_with("judge") || role == "citation_judge" || role == "verifier") return 0.0;
  return 0.7;
}

double cosine(const Embedding& a, const Embedding& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  const auto n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace esg::llm
