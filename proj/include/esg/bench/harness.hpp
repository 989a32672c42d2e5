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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "esg/agent/orchestrator.hpp"
#include "esg/eval/evaluator.hpp"

namespace esg::bench {

struct Question {
  std::string id;
  int level = 1;
  eval::QuestionType qtype = eval::QuestionType::kFib;
  std::string question;
  std::optional<std::vector<std::string>> choices;
  std::optional<std::string> answer;
  std::vector<std::filesystem::path> attachments;  // absolute
  std::optional<char> pillar;
  std::vector<int> capabilities;
  std::optional<std::string> template_name;
};

// Validates every line; attachments resolve against the file's directory.
// Throws SchemaError (with the line number), DuplicateId or MissingAttachment.
std::vector<Question> load_questions(const std::filesystem::path& path);
Question parse_question(const Json& j, const std::filesystem::path& base_dir);
Json to_json(const Question& q);
// The text handed to the agent: question, lettered options and answer format.
std::string agent_prompt(const Question& q);

struct ProviderConfig {
  std::string id;
  std::string kind = "openai";  // openai | replay
  std::string base_url;
  std::string chat_path = "/v1/chat/completions";
  std::string embed_path = "/v1/embeddings";
  std::string api_key_env;
  std::string transcript;  // replay only
  int timeout_s = 120;
};

struct EmbedderConfig {
  std::string kind = "stub";  // stub | openai
  std::string provider;
  std::string model;
  std::size_t dimension = llm::StubEmbedder::kDefaultDimension;
};

struct BenchConfig {
  std::string label = "ESGAgent";
  std::vector<ProviderConfig> providers;
  std::map<std::string, llm::RoleBinding> roles;
  EmbedderConfig embedder;
  agent::AgentConfig agent;
  std::optional<std::filesystem::path> index_dir;
  std::optional<std::filesystem::path> corpus_dir;  // indexed at start-up when no index_dir is set
  std::optional<std::filesystem::path> search_fixtures;
  std::optional<std::string> search_url;
  std::vector<std::string> sandbox_command;
  int exec_timeout_s = 30;
  retrieval::RetrievalMode retrieval_mode = retrieval::RetrievalMode::kHybrid;
  retrieval::ChunkingOptions chunking;
  std::vector<std::string> judges;
  Json raw = Json::object();  // the file as read, for the manifest
};

// Sections: label, providers, roles, embedder, budgets, tools, retrieval,
// judges, agent. Relative paths resolve against the file's directory.
BenchConfig load_config(const std::filesystem::path& path);
BenchConfig parse_config(const Json& j, const std::filesystem::path& base_dir);

// Roles a replay-driven gateway answers for.
std::vector<std::string> replay_roles(const BenchConfig& config);

// Builds gateways from the config, or from scripted transcripts when a
// replay path is given (a directory of <question-id>.jsonl or one file).
class GatewayFactory {
 public:
  GatewayFactory(BenchConfig config, std::optional<std::filesystem::path> replay);
  std::unique_ptr<llm::Gateway> make(const std::string& key) const;
  bool replaying() const { return replay_.has_value(); }

 private:
  BenchConfig config_;
  std::optional<std::filesystem::path> replay_;
};

// Loads (or builds from the corpus) the index and wires the search backend.
tools::ToolEnvironment make_environment(const BenchConfig& config);

// Ingests every supported file under `dir` in path order.
retrieval::KnowledgeIndex build_index(const std::filesystem::path& dir, const retrieval::ChunkingOptions& chunking,
                                      llm::Gateway& gateway);

struct Manifest {
  std::string run_id;
  std::string label;
  Json config = Json::object();
  std::string question_set_digest;
  std::size_t questions = 0;
  std::set<std::string> ablations;
  std::size_t parallelism = 1;
  bool replay = false;
  std::string started_at;
  std::string finished_at;
};
Json to_json(const Manifest& m);
Manifest manifest_from_json(const Json& j);

struct AnswerRecord {
  std::string question_id;
  int level = 1;
  std::optional<std::string> final_answer;
  std::string status;
  std::size_t steps = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t duration_ms = 0;
  std::optional<std::string> report;  // relative to the run directory
  std::optional<std::string> error;
};
Json to_json(const AnswerRecord& a);
AnswerRecord answer_from_json(const Json& j);

struct RunOptions {
  std::set<std::string> ablations;
  std::size_t parallelism = 1;
  std::filesystem::path runs_dir = "runs";
  std::optional<std::string> run_id;
  std::optional<std::filesystem::path> replay;
  std::string question_set_digest;
};

struct BenchResult {
  Manifest manifest;
  std::filesystem::path run_dir;
  std::vector<AnswerRecord> answers;  // question order
  std::vector<eval::GradedAnswer> graded;
  std::size_t max_in_flight = 0;
  bool any_error() const;
};

BenchResult run_benchmark(const std::vector<Question>& questions, const BenchConfig& config, const RunOptions& options);

struct ResultsRow {
  std::string label;
  std::optional<eval::LevelAccuracy> level1;
  std::optional<eval::LevelAccuracy> level2;
  std::optional<eval::LevelAccuracy> total;
};

// Throws InconsistentCounts when a level-1/2 answer has no grade.
ResultsRow tabulate(const std::string& label, const std::vector<AnswerRecord>& answers,
                    const std::vector<eval::GradedAnswer>& graded);
std::string results_markdown(const std::vector<ResultsRow>& rows);
std::string results_csv(const std::vector<ResultsRow>& rows);
std::string summary_csv(const ResultsRow& row);

// Reads a persisted run directory back.
struct PersistedRun {
  Manifest manifest;
  std::vector<Question> questions;
  std::vector<AnswerRecord> answers;
  std::vector<eval::GradedAnswer> graded;
};
PersistedRun load_run(const std::filesystem::path& run_dir);

struct Level3Row {
  std::string question_id;
  std::string judge;  // a judge role, or "ensemble"
  std::optional<eval::DimensionScores> dims;
  std::optional<eval::CitationScores> citations;
  std::optional<double> overall;
};

struct Level3Summary {
  std::vector<Level3Row> rows;
  std::map<std::string, std::string> errors;  // question id -> message
  std::string markdown;
};

// Judges every level-3 report of a run. Writes eval/level3_scores.csv,
// eval/level3_summary.md and eval/judgments.jsonl.
Level3Summary evaluate_level3(const std::filesystem::path& run_dir, const std::vector<std::string>& judges,
                              const GatewayFactory& gateways);

// Exit codes: 0 success, 1 a per-question error, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esg::bench
