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
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"
#include "esg/llm/gateway.hpp"
#include "esg/retrieval/document.hpp"
#include "esg/retrieval/index.hpp"
#include "esg/tools/plan_ledger.hpp"
#include "esg/tools/sandbox_client.hpp"
#include "esg/tools/search.hpp"

namespace esg::tools {

enum class ArgType { kText, kInt, kReal, kBool, kPath, kList, kObject };

std::string_view to_string(ArgType type);

struct ArgSpec {
  ArgType type = ArgType::kText;
  bool required = false;
};

struct ToolSpec {
  std::string name;
  std::string description;
  std::map<std::string, ArgSpec> arg_schema;
  std::optional<int> step_budget;
};

struct ToolCall {
  std::string tool;
  Json args = Json::object();
  std::string call_id;
};

struct ToolError {
  ErrorKind kind = ErrorKind::kExecutionError;
  std::string message;
};

// A source surfaced by a tool call (retrieval hit, search result, page).
struct Evidence {
  std::string uri;
  std::string title;
  std::string text;
};

struct ToolResult {
  bool ok = true;
  std::string summary;
  std::vector<std::filesystem::path> artifact_paths;
  std::optional<ToolError> error;
  std::vector<Evidence> evidence;

  static ToolResult success(std::string summary);
  static ToolResult failure(ErrorKind kind, std::string message);
};

struct ToolRecord {
  ToolCall call;
  ToolResult result;
  std::string output_digest;
  std::int64_t duration_ms = 0;
};

struct LlmCall {
  std::string role;
  llm::Usage usage;
  std::int64_t latency_ms = 0;
};

// Per-run view of the gateway that remembers every completion it issued, so
// the orchestrator can attribute calls to trace steps.
class LlmSession {
 public:
  explicit LlmSession(llm::Gateway& gateway) : gateway_(gateway) {}

  llm::ChatResponse complete(llm::ChatRequest request);
  llm::ChatResponse complete(const std::string& role, std::vector<llm::ChatMessage> messages);
  std::vector<llm::Embedding> embed(const std::vector<std::string>& texts) { return gateway_.embed(texts); }

  // Calls made since the previous drain.
  std::vector<LlmCall> drain();
  std::size_t calls_for(std::string_view role) const;
  std::size_t total_calls() const { return total_; }
  llm::Gateway& gateway() { return gateway_; }

 private:
  llm::Gateway& gateway_;
  std::vector<LlmCall> pending_;
  std::map<std::string, std::size_t, std::less<>> per_role_;
  std::size_t total_ = 0;
};

// Read-only services shared by every run.
struct ToolEnvironment {
  std::shared_ptr<const retrieval::KnowledgeIndex> index;
  std::shared_ptr<SearchBackend> search;
  std::vector<std::string> sandbox_command;
  retrieval::ExtractorRegistry extractors = retrieval::ExtractorRegistry::with_builtins();
  std::size_t retrieval_top_k = 5;
  retrieval::RetrievalMode retrieval_mode = retrieval::RetrievalMode::kHybrid;
  int researcher_budget = 3;
  int analyzer_budget = 3;
  std::size_t analyzer_chunk_size = 4000;
  std::size_t max_search_results = 10;
  int exec_timeout_s = 30;
  int exec_mem_limit_mb = 512;
};

struct Termination {
  std::string final_answer;
  std::string reasoning;
};

// Mutable state of one run, owned by the orchestrator.
class ToolContext {
 public:
  ToolContext(std::filesystem::path workdir, LlmSession& llm, const ToolEnvironment& env);

  const std::filesystem::path& workdir() const { return workdir_; }
  LlmSession& llm() { return llm_; }
  const ToolEnvironment& env() const { return env_; }
  PlanLedger& plan() { return plan_; }
  const PlanLedger& plan() const { return plan_; }

  const std::optional<Termination>& termination() const { return termination_; }
  // Throws AlreadyTerminated on a second call.
  void terminate(std::string final_answer, std::string reasoning);

  const std::vector<ToolRecord>& records() const { return records_; }
  void add_record(ToolRecord record) { records_.push_back(std::move(record)); }
  std::vector<const ToolRecord*> history(std::string_view tool) const;

  // Resolves `p` against the workdir and throws JailViolation when it escapes.
  std::filesystem::path resolve_inside(const std::filesystem::path& p) const;

  SandboxClient& sandbox();
  std::string next_call_id(std::string_view tool);

 private:
  std::filesystem::path workdir_;
  LlmSession& llm_;
  const ToolEnvironment& env_;
  PlanLedger plan_;
  std::optional<Termination> termination_;
  std::vector<ToolRecord> records_;
  std::unique_ptr<SandboxClient> sandbox_;
  std::map<std::string, int, std::less<>> call_counter_;
};

using ToolHandler =
    std::function<ToolResult(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior)>;

class ToolRegistry {
 public:
  static const std::vector<std::string>& canonical_names();

  // Throws UnknownToolName for names outside the canonical set and
  // DuplicateTool when the name is taken.
  void register_tool(ToolSpec spec, ToolHandler handler, bool enabled = true);
  void set_enabled(const std::string& name, bool enabled);

  bool is_registered(std::string_view name) const;
  bool is_enabled(std::string_view name) const;
  const ToolSpec& spec(std::string_view name) const;
  std::vector<std::string> names() const;
  std::vector<std::string> enabled_names() const;

  // Validates and dispatches one call, appending exactly one record to the
  // context. Failures come back as ToolResult::error, never as exceptions.
  ToolResult invoke(ToolCall call, ToolContext& ctx) const;

  // Tool descriptions for the enabled tools, for the system prompt.
  std::string describe() const;

 private:
  struct Entry {
    ToolSpec spec;
    ToolHandler handler;
    bool enabled = true;
  };
  const Entry* find(std::string_view name) const;
  std::vector<Entry> entries_;
};

// Throws ArgValidation when `args` does not satisfy `spec`. Null values count
// as absent; unknown keys are ignored.
void validate_args(const ToolSpec& spec, const Json& args);

// Helpers for handlers reading validated args.
std::optional<std::string> opt_string(const Json& args, const std::string& key);
std::optional<std::int64_t> opt_int(const Json& args, const std::string& key);
std::string required_string(const Json& args, const std::string& key);

}  // namespace esg::tools
