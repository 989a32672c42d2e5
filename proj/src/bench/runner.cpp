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

#include <algorithm>
#include <atomic>
#include <ctime>
#include <mutex>
#include <thread>

#include "esg/bench/harness.hpp"
#include "esg/common/error.hpp"
#include "esg/common/text.hpp"

namespace esg::bench {

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string new_run_id() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
  return std::string(buf) + "-" + random_hex(3);
}

std::string run_label(const BenchConfig& config, const std::set<std::string>& ablations) {
  std::string label = config.label;
  for (const auto& a : ablations) label += "-w/o-" + a;
  return label;
}

template <typename T>
void write_jsonl(const fs::path& path, const std::vector<T>& items) {
  std::string body;
  for (const auto& item : items) body += dump_line(to_json(item)) + "\n";
  write_file(path, body);
}

struct Job {
  AnswerRecord answer;
  std::optional<eval::GradedAnswer> graded;
};

Job run_one(const Question& q, const agent::AgentConfig& agent_config,
            const tools::ToolEnvironment& env, const GatewayFactory& factory, const fs::path& run_dir) {
  const auto key = tools::sanitize_id(q.id);
  Job job;
  job.answer.question_id = q.id;
  job.answer.level = q.level;

  agent::RunOutcome outcome;
  try {
    auto gateway = factory.make(q.id);
    agent::RunRequest req{agent_prompt(q), q.attachments, run_dir / "work" / key};
    outcome = agent::run(req, agent_config, *gateway, env);
  } catch (const std::exception& e) {
    outcome.status = agent::RunStatus::kError;
    const auto* err = dynamic_cast<const Error*>(&e);
    outcome.error = tools::ToolError{err ? err->kind() : ErrorKind::kExecutionError, e.what()};
  }

  write_jsonl(run_dir / ("trace-" + key + ".jsonl"), outcome.trace);
  write_jsonl(run_dir / ("evidence-" + key + ".jsonl"), outcome.evidence);
  write_jsonl(run_dir / ("memory-" + key + ".jsonl"), outcome.memory);

  auto& a = job.answer;
  a.final_answer = outcome.final_answer;
  a.status = std::string(agent::to_string(outcome.status));
  a.steps = outcome.trace.size();
  a.prompt_tokens = outcome.usage.prompt_tokens;
  a.completion_tokens = outcome.usage.completion_tokens;
  a.duration_ms = outcome.duration_ms;
  if (outcome.error) a.error = std::string(to_string(outcome.error->kind)) + ": " + outcome.error->message;
  if (outcome.report_path && fs::exists(*outcome.report_path)) {
    const auto rel = fs::path("reports") / key / "report.md";
    fs::create_directories((run_dir / rel).parent_path());
    fs::copy_file(*outcome.report_path, run_dir / rel, fs::copy_options::overwrite_existing);
    a.report = rel.generic_string();
  }

  if (q.level <= 2) {
    eval::GradedAnswer g;
    g.question_id = q.id;
    g.level = q.level;
    g.predicted = outcome.final_answer.value_or("");
    g.gold = *q.answer;
    g.correct = outcome.final_answer && eval::grade_closed(*outcome.final_answer, *q.answer, q.qtype);
    job.graded = g;
  }
  return job;
}

Json graded_json(const eval::GradedAnswer& g) {
  return {{"question_id", g.question_id}, {"level", g.level}, {"predicted", g.predicted}, {"gold", g.gold},
          {"correct", g.correct}};
}

}  // namespace

bool BenchResult::any_error() const {
  return std::any_of(answers.begin(), answers.end(), [](const auto& a) { return a.status == "error"; });
}

Json to_json(const Manifest& m) {
  return {{"run_id", m.run_id},
          {"label", m.label},
          {"config", m.config},
          {"question_set_digest", m.question_set_digest},
          {"questions", m.questions},
          {"ablations", Json(std::vector<std::string>(m.ablations.begin(), m.ablations.end()))},
          {"parallelism", m.parallelism},
          {"replay", m.replay},
          {"started_at", m.started_at},
          {"finished_at", m.finished_at}};
}

Manifest manifest_from_json(const Json& j) {
  Manifest m;
  m.run_id = j.at("run_id").get<std::string>();
  m.label = j.value("label", std::string("ESGAgent"));
  m.config = j.value("config", Json::object());
  m.question_set_digest = j.value("question_set_digest", std::string());
  m.questions = j.value("questions", std::size_t{0});
  for (const auto& a : j.value("ablations", Json::array())) m.ablations.insert(a.get<std::string>());
  m.parallelism = j.value("parallelism", std::size_t{1});
  m.replay = j.value("replay", false);
  m.started_at = j.value("started_at", std::string());
  m.finished_at = j.value("finished_at", std::string());
  return m;
}

Json to_json(const AnswerRecord& a) {
  Json j = {{"question_id", a.question_id},
            {"level", a.level},
            {"final_answer", a.final_answer ? Json(*a.final_answer) : Json(nullptr)},
            {"status", a.status},
            {"steps", a.steps},
            {"prompt_tokens", a.prompt_tokens},
            {"completion_tokens", a.completion_tokens},
            {"duration_ms", a.duration_ms},
            {"report", a.report ? Json(*a.report) : Json(nullptr)},
            {"error", a.error ? Json(*a.error) : Json(nullptr)}};
  return j;
}

AnswerRecord answer_from_json(const Json& j) {
  AnswerRecord a;
  a.question_id = j.at("question_id").get<std::string>();
  a.level = j.at("level").get<int>();
  if (j.contains("final_answer") && j["final_answer"].is_string()) a.final_answer = j["final_answer"].get<std::string>();
  a.status = j.value("status", std::string("error"));
  a.steps = j.value("steps", std::size_t{0});
  a.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
  a.completion_tokens = j.value("completion_tokens", std::int64_t{0});
  a.duration_ms = j.value("duration_ms", std::int64_t{0});
  if (j.contains("report") && j["report"].is_string()) a.report = j["report"].get<std::string>();
  if (j.contains("error") && j["error"].is_string()) a.error = j["error"].get<std::string>();
  return a;
}

BenchResult run_benchmark(const std::vector<Question>& questions, const BenchConfig& config, const RunOptions& options) {
  if (options.parallelism < 1) throw Error(ErrorKind::kUsageError, "parallelism must be at least 1");
  const auto& canonical = tools::ToolRegistry::canonical_names();
  for (const auto& a : options.ablations) {
    if (std::find(canonical.begin(), canonical.end(), a) == canonical.end()) {
      throw Error(ErrorKind::kUnknownToolName, "cannot ablate unknown tool '" + a + "'");
    }
  }

  BenchResult result;
  auto& m = result.manifest;
  m.run_id = options.run_id.value_or(new_run_id());
  if (tools::sanitize_id(m.run_id) != m.run_id || m.run_id.empty()) {
    throw Error(ErrorKind::kUsageError, "run id may only contain letters, digits, '_' and '-'");
  }
  result.run_dir = options.runs_dir / m.run_id;
  if (fs::exists(result.run_dir)) throw Error(ErrorKind::kDuplicateId, "run directory already exists: " + result.run_dir.string());
  fs::create_directories(result.run_dir / "eval");

  m.label = run_label(config, options.ablations);
  m.config = config.raw;
  m.questions = questions.size();
  m.ablations = options.ablations;
  m.parallelism = options.parallelism;
  m.replay = options.replay.has_value();
  m.started_at = utc_now();

  std::string question_lines;
  for (const auto& q : questions) question_lines += dump_line(to_json(q)) + "\n";
  m.question_set_digest = options.question_set_digest.empty() ? sha256_hex(question_lines) : options.question_set_digest;
  write_file(result.run_dir / "questions.jsonl", question_lines);
  write_file(result.run_dir / "manifest.json", to_json(m).dump(2) + "\n");

  agent::AgentConfig agent_config = config.agent;
  agent_config.disabled_tools.insert(options.ablations.begin(), options.ablations.end());
  agent_config.validate();
  const auto env = make_environment(config);
  const GatewayFactory factory(config, options.replay);

  std::vector<Job> jobs(questions.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> in_flight{0};
  std::atomic<std::size_t> peak{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < questions.size(); i = next++) {
      const auto now = ++in_flight;
      for (auto seen = peak.load(); now > seen && !peak.compare_exchange_weak(seen, now);) {
      }
      jobs[i] = run_one(questions[i], agent_config, env, factory, result.run_dir);
      --in_flight;
    }
  };
  const auto workers = std::min(options.parallelism, std::max<std::size_t>(questions.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  result.max_in_flight = peak.load();

  std::string answers, graded;
  for (auto& job : jobs) {
    answers += dump_line(to_json(job.answer)) + "\n";
    result.answers.push_back(job.answer);
    if (job.graded) {
      graded += dump_line(graded_json(*job.graded)) + "\n";
      result.graded.push_back(*job.graded);
    }
  }
  write_file(result.run_dir / "answers.jsonl", answers);
  write_file(result.run_dir / "graded.jsonl", graded);

  const auto row = tabulate(m.label, result.answers, result.graded);
  write_file(result.run_dir / "eval" / "summary.csv", summary_csv(row));
  write_file(result.run_dir / "results.md", results_markdown({row}));
  write_file(result.run_dir / "results.csv", results_csv({row}));

  m.finished_at = utc_now();
  write_file(result.run_dir / "manifest.json", to_json(m).dump(2) + "\n");
  return result;
}

PersistedRun load_run(const fs::path& run_dir) {
  if (!fs::exists(run_dir / "manifest.json")) throw Error(ErrorKind::kIoError, "not a run directory: " + run_dir.string());
  PersistedRun run;
  run.manifest = manifest_from_json(Json::parse(read_file(run_dir / "manifest.json")));
  auto each_line = [&](const fs::path& p, auto&& fn) {
    if (!fs::exists(p)) return;
    for (const auto& line : text::split_lines(read_file(p))) {
      if (!text::trim(line).empty()) fn(Json::parse(line));
    }
  };
  each_line(run_dir / "questions.jsonl", [&](Json j) {
    j.erase("attachments");  // already staged; the originals may have moved
    run.questions.push_back(parse_question(j, run_dir));
  });
  each_line(run_dir / "answers.jsonl", [&](const Json& j) { run.answers.push_back(answer_from_json(j)); });
  each_line(run_dir / "graded.jsonl", [&](const Json& j) {
    run.graded.push_back({j.at("question_id").get<std::string>(), j.value("predicted", std::string()),
                          j.value("gold", std::string()), j.value("correct", false), j.value("level", 1)});
  });
  return run;
}

}  // namespace esg::bench
