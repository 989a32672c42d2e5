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

#include "esg/agent/orchestrator.hpp"

namespace esg::agent {

Json to_json(const TraceStep& step) {
  Json calls = Json::array();
  for (const auto& c : step.llm_calls) {
    calls.push_back({{"role", c.role},
                     {"prompt_tokens", c.usage.prompt_tokens},
                     {"completion_tokens", c.usage.completion_tokens},
                     {"latency_ms", c.latency_ms}});
  }
  Json j = {{"index", step.index},
            {"role", step.role},
            {"thinking", step.thinking},
            {"tool_call", nullptr},
            {"ok", step.ok},
            {"error", nullptr},
            {"observation", step.observation},
            {"output_digest", step.output_digest},
            {"artifacts", step.artifacts},
            {"usage", {{"prompt_tokens", step.usage.prompt_tokens}, {"completion_tokens", step.usage.completion_tokens}}},
            {"llm_calls", calls},
            {"duration_ms", step.duration_ms}};
  if (step.tool_call) {
    j["tool_call"] = {{"tool", step.tool_call->tool}, {"args", step.tool_call->args}, {"call_id", step.tool_call->call_id}};
  }
  if (step.error) j["error"] = {{"kind", std::string(to_string(step.error->kind))}, {"message", step.error->message}};
  return j;
}

Json to_json(const MemoryEntry& entry) {
  return {{"kind", std::string(to_string(entry.kind))},
          {"text", entry.text},
          {"source_step", entry.source_step},
          {"entities", entry.entities}};
}

Json to_json(const EvidenceRecord& record) {
  return {{"step", record.step},
          {"tool", record.tool},
          {"uri", record.evidence.uri},
          {"title", record.evidence.title},
          {"text", record.evidence.text}};
}

}  // namespace esg::agent
