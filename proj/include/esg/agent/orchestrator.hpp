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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "esg/tools/builtin.hpp"
#include "esg/tools/tool.hpp"

namespace esg::agent {

struct AgentConfig {
  std::map<std::string, std::string> role_models;
  std::map<std::string, int> step_budget = {{"main", 50}, {"deep_researcher", 3}, {"deep_analyzer", 3}};
  std::set<std::string> disabled_tools;
  std::size_t retrieval_top_k = 5;
  bool plan = true;
  bool verify = true;
  int max_retries = 2;
  int memory_every = 10;
  std::size_t memory_max_insights = 5;
  std::size_t observation_limit = 8000;  // code points of a tool result fed back to the model
  std::chrono::milliseconds timeout{std::chrono::minutes(10)};

  int budget(const std::string& role) const;
  // Throws ConfigError.
  void validate() const;
};

struct TraceStep {
  std::size_t index = 0;
  std::string role = "main";
  std::string thinking;
  std::optional<tools::ToolCall> tool_call;
  bool ok = true;
  std::optional<tools::ToolError> error;
  std::string observation;
  std::string output_digest;
  std::vector<std::string> artifacts;  // relative to the run directory
  llm::Usage usage;
  std::vector<tools::LlmCall> llm_calls;
  std::int64_t duration_ms = 0;
};

enum class MemoryKind { kObservation, kInsight, kEntityFact };
std::string_view to_string(MemoryKind kind);

struct MemoryEntry {
  MemoryKind kind = MemoryKind::kInsight;
  std::string text;
  std::size_t source_step = 0;
  std::set<std::string> entities;
};

struct EvidenceRecord {
  std::size_t step = 0;
  std::string tool;
  tools::Evidence evidence;
};

enum class RunStatus { kDone, kBudgetExhausted, kError };
std::string_view to_string(RunStatus status);

struct RunOutcome {
  std::optional<std::string> final_answer;
  std::optional<std::string> reasoning;
  RunStatus status = RunStatus::kError;
  std::optional<tools::ToolError> error;
  std::vector<TraceStep> trace;
  std::vector<std::filesystem::path> artifacts;
  std::optional<std::filesystem::path> report_path;
  std::vector<EvidenceRecord> evidence;
  std::vector<MemoryEntry> memory;
  std::vector<tools::PlanStep> plan;
  llm::Usage usage;
  std::size_t llm_calls = 0;
  std::int64_t duration_ms = 0;
};

// One planner call. Output that does not parse as a step list degrades to a
// single step covering the whole query.
tools::PlanLedger plan(tools::LlmSession& llm, const std::string& query);

enum class Verdict { kAccept, kRetry, kAcceptWithFailure };
std::string_view to_string(Verdict verdict);

struct Verification {
  Verdict verdict = Verdict::kAccept;
  std::string reason;
};

Verification verify_and_refine(tools::LlmSession& llm, const tools::PlanStep& subtask,
                               const tools::ToolResult& result, int attempts_left);

// Distils a window of trace steps into at most `max_insights` insights with
// resolved entity names. Windows without tool output make no call.
std::vector<MemoryEntry> memory_synthesize(tools::LlmSession& llm, const std::vector<TraceStep>& window,
                                           std::size_t max_insights = 5);

struct ParsedAction {
  std::string thinking;
  std::optional<tools::ToolCall> call;
  std::string problem;  // set when no usable call was found
};

// The first fenced block labelled with a tool name (or a ```json block
// naming one) is the action; its body holds the JSON arguments.
ParsedAction parse_action(const std::string& reply);

struct RunRequest {
  std::string query;
  std::vector<std::filesystem::path> attachments;
  std::filesystem::path workdir;
};

// Runs the think/act loop to completion. Failures during the run end up in
// the outcome; only an empty query or an invalid config throws.
RunOutcome run(const RunRequest& request, const AgentConfig& config, llm::Gateway& gateway,
               const tools::ToolEnvironment& env);

Json to_json(const TraceStep& step);
Json to_json(const MemoryEntry& entry);
Json to_json(const EvidenceRecord& record);

}  // namespace esg::agent
