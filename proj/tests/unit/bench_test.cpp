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

#include <sstream>

#include <gtest/gtest.h>

#include "esg/bench/harness.hpp"
#include "esg/common/text.hpp"
#include "test_support.hpp"

namespace esg::bench {
namespace {

using esg::testing::kind_of;
using esg::testing::TempDir;

const fs::path kBench = fs::path(ESG_FIXTURE_DIR) / "bench";

std::vector<Question> pick(const std::vector<Question>& all, const std::vector<std::string>& ids) {
  std::vector<Question> out;
  for (const auto& id : ids) {
    for (const auto& q : all) {
      if (q.id == id) out.push_back(q);
    }
  }
  return out;
}

std::vector<Question> closed_questions() {
  return pick(load_questions(kBench / "questions.jsonl"), {"waci_a", "gri_101", "gri_304_tf", "water_mc"});
}

RunOptions replay_options(const TempDir& dir, const std::string& run_id, const std::string& replay = "replay") {
  RunOptions o;
  o.runs_dir = dir.path() / "runs";
  o.run_id = run_id;
  o.replay = kBench / replay;
  return o;
}

// answers.jsonl with the timing field removed.
std::string untimed_answers(const fs::path& run_dir) {
  std::string out;
  for (const auto& line : text::split_lines(read_file(run_dir / "answers.jsonl"))) {
    if (text::trim(line).empty()) continue;
    auto j = Json::parse(line);
    j.erase("duration_ms");
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<std::string> tools_in_trace(const fs::path& file) {
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(read_file(file))) {
    if (text::trim(line).empty()) continue;
    const auto j = Json::parse(line);
    if (j["tool_call"].is_object()) out.push_back(j["tool_call"]["tool"].get<std::string>());
  }
  return out;
}

void write_questions(const fs::path& path, const std::vector<std::string>& lines) {
  std::string body;
  for (const auto& l : lines) body += l + "\n";
  write_file(path, body);
}

TEST(QuestionsTest, LoadsFixtureSet) {
  const auto qs = load_questions(kBench / "questions.jsonl");
  ASSERT_EQ(qs.size(), 5u);
  EXPECT_EQ(qs[0].id, "waci_a");
  EXPECT_EQ(qs[0].answer, "250");
  ASSERT_EQ(qs[0].attachments.size(), 1u);
  EXPECT_TRUE(qs[0].attachments[0].is_absolute());
  EXPECT_TRUE(fs::exists(qs[0].attachments[0]));
  EXPECT_EQ(qs[0].template_name, "template 1");
  EXPECT_EQ(qs[3].qtype, eval::QuestionType::kMc);
  EXPECT_EQ(qs[3].choices->size(), 4u);
  EXPECT_EQ(qs[4].level, 3);
  EXPECT_FALSE(qs[4].answer);
}

TEST(QuestionsTest, ThreeValidLines) {
  TempDir d;
  write_questions(d.path() / "q.jsonl",
                  {R"({"id":"a","level":1,"qtype":"tf","question":"x?","answer":"True"})",
                   R"({"id":"b","level":2,"qtype":"fib","question":"y?","answer":"4"})",
                   R"({"id":"c","level":3,"qtype":"open","question":"Write a report."})"});
  EXPECT_EQ(load_questions(d.path() / "q.jsonl").size(), 3u);
}

TEST(QuestionsTest, SchemaErrorsCarryTheLine) {
  TempDir d;
  const auto p = d.path() / "q.jsonl";
  write_questions(p, {R"({"id":"a","level":1,"qtype":"tf","question":"x?","answer":"True"})",
                      R"({"id":"b","level":1,"qtype":"tf","question":"no answer"})"});
  try {
    load_questions(p);
    FAIL() << "expected SchemaError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchemaError);
    EXPECT_NE(std::string(e.what()).find("q.jsonl:2:"), std::string::npos);
  }

  auto one = [&](const std::string& line) {
    write_questions(p, {line});
    return kind_of([&] { load_questions(p); });
  };
  EXPECT_EQ(one(R"({"id":"a","level":1,"qtype":"tf","question":"x?","answer":"True","capabilities":[0]})"),
            ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":1,"qtype":"tf","question":"x?","answer":"True","capabilities":[11]})"),
            ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":3,"qtype":"open","question":"x","answer":"no"})"), ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":3,"qtype":"fib","question":"x"})"), ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":1,"qtype":"mc","question":"x","answer":"A"})"), ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":4,"qtype":"tf","question":"x","answer":"T"})"), ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":1,"qtype":"tf","question":"x","answer":"T","pillar":"X"})"), ErrorKind::kSchemaError);
  EXPECT_EQ(one("not json"), ErrorKind::kSchemaError);
  EXPECT_EQ(one(R"({"id":"a","level":1,"qtype":"tf","question":"x","answer":"T","attachments":["gone.csv"]})"),
            ErrorKind::kMissingAttachment);

  write_questions(p, {R"({"id":"a","level":1,"qtype":"tf","question":"x?","answer":"True"})",
                      R"({"id":"a","level":1,"qtype":"tf","question":"y?","answer":"False"})"});
  EXPECT_EQ(kind_of([&] { load_questions(p); }), ErrorKind::kDuplicateId);
}

TEST(QuestionsTest, PromptListsLetteredOptions) {
  const auto qs = load_questions(kBench / "questions.jsonl");
  const auto prompt = agent_prompt(qs[3]);
  EXPECT_NE(prompt.find("\nA. 20%"), std::string::npos);
  EXPECT_NE(prompt.find("\nB. 35%"), std::string::npos);
  EXPECT_NE(prompt.find("letter"), std::string::npos);
}

TEST(ConfigTest, FixtureConfigAndErrors) {
  const auto c = load_config(kBench / "config.json");
  EXPECT_EQ(c.judges.size(), 4u);
  EXPECT_EQ(c.agent.budget("main"), 50);
  EXPECT_EQ(c.agent.retrieval_top_k, 3u);
  ASSERT_TRUE(c.corpus_dir);
  EXPECT_TRUE(fs::is_directory(*c.corpus_dir));
  ASSERT_TRUE(c.search_fixtures);
  EXPECT_TRUE(fs::exists(*c.search_fixtures));

  auto parse = [](const char* text) { return kind_of([&] { parse_config(Json::parse(text), "."); }); };
  EXPECT_EQ(parse(R"({"rolez": {}})"), ErrorKind::kConfigError);
  EXPECT_EQ(parse(R"({"roles": {"main": {"provider": "nope", "model": "m"}}})"), ErrorKind::kConfigError);
  EXPECT_EQ(parse(R"({"budgets": {"main": 0}})"), ErrorKind::kConfigError);
  EXPECT_EQ(parse(R"({"providers": [{"id": "p", "kind": "openai"}]})"), ErrorKind::kConfigError);
  EXPECT_EQ(parse(R"({"retrieval": {"mode": "magic"}})"), ErrorKind::kConfigError);
  EXPECT_EQ(parse(R"({"tools": {"disabled": ["teleport"]}})"), ErrorKind::kUnknownToolName);
  EXPECT_EQ(parse(R"({"agent": {"plan": "yes"}})"), ErrorKind::kConfigError);
}

TEST(ConfigTest, RoleBindingsReachTheGateway) {
  const auto c = parse_config(Json::parse(R"({
      "providers": [{"id": "local", "kind": "openai", "base_url": "http://127.0.0.1:9"}],
      "roles": {"main": {"provider": "local", "model": "m1"}, "judge:x": {"provider": "local", "model": "m2"}}})"),
                              ".");
  const auto g = GatewayFactory(c, std::nullopt).make("any");
  EXPECT_TRUE(g->has_role("main"));
  EXPECT_TRUE(g->has_role("judge:x"));
  EXPECT_FALSE(g->has_role("planner"));
  EXPECT_EQ(g->embedding_dimension(), 256u);
}

TEST(RunBenchmarkTest, FourQuestionsTwoWorkers) {
  TempDir d;
  auto opts = replay_options(d, "r1");
  opts.parallelism = 2;
  const auto result = run_benchmark(closed_questions(), load_config(kBench / "config.json"), opts);
  ASSERT_EQ(result.answers.size(), 4u);
  EXPECT_TRUE(result.manifest.ablations.empty());
  EXPECT_LE(result.max_in_flight, 2u);
  EXPECT_GE(result.max_in_flight, 1u);
  EXPECT_FALSE(result.any_error());
  for (const auto& a : result.answers) EXPECT_EQ(a.status, "done") << a.question_id;
  EXPECT_EQ(result.answers[0].final_answer, "250");
  EXPECT_EQ(result.answers[1].final_answer, "Kunming-Montreal Global Biodiversity Framework");
  ASSERT_EQ(result.graded.size(), 4u);
  for (const auto& g : result.graded) EXPECT_TRUE(g.correct) << g.question_id;

  const auto& dir = result.run_dir;
  for (const char* f : {"manifest.json", "questions.jsonl", "answers.jsonl", "graded.jsonl", "results.md", "results.csv",
                        "eval/summary.csv", "trace-waci_a.jsonl", "trace-gri_101.jsonl", "evidence-waci_a.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_TRUE(fs::exists(dir / "work" / "waci_a" / "holdings.csv"));
  const auto manifest = Json::parse(read_file(dir / "manifest.json"));
  EXPECT_EQ(manifest["run_id"], "r1");
  EXPECT_EQ(manifest["questions"], 4);
  EXPECT_FALSE(manifest["finished_at"].get<std::string>().empty());
  EXPECT_EQ(read_file(dir / "eval" / "summary.csv"), "level,n,correct,acc_pct\n1,2,2,100.00\n2,2,2,100.00\ntotal,4,4,100.00\n");
  EXPECT_EQ(tools_in_trace(dir / "trace-gri_101.jsonl"), (std::vector<std::string>{"deep_researcher", "done"}));

  // Run ids are unique.
  EXPECT_EQ(kind_of([&] { run_benchmark(closed_questions(), load_config(kBench / "config.json"), opts); }),
            ErrorKind::kDuplicateId);
}

TEST(RunBenchmarkTest, AblationIsRecordedAndUnreachable) {
  TempDir d;
  auto opts = replay_options(d, "ablate", "replay_ablated");
  opts.ablations = {"deep_researcher"};
  const auto result = run_benchmark(closed_questions(), load_config(kBench / "config.json"), opts);
  EXPECT_EQ(result.manifest.ablations, (std::set<std::string>{"deep_researcher"}));
  EXPECT_EQ(result.manifest.label, "ESGAgent-w/o-deep_researcher");
  const auto manifest = Json::parse(read_file(result.run_dir / "manifest.json"));
  EXPECT_EQ(manifest["ablations"], Json::array({"deep_researcher"}));
  for (const auto& q : closed_questions()) {
    const auto tools = tools_in_trace(result.run_dir / ("trace-" + q.id + ".jsonl"));
    EXPECT_EQ(std::count(tools.begin(), tools.end(), "deep_researcher"), 0) << q.id;
  }
  EXPECT_FALSE(result.any_error());
  EXPECT_EQ(kind_of([&] {
              auto o = replay_options(d, "bad");
              o.ablations = {"teleport"};
              run_benchmark(closed_questions(), load_config(kBench / "config.json"), o);
            }),
            ErrorKind::kUnknownToolName);
}

TEST(RunBenchmarkTest, ScriptedCallToAblatedToolFailsCleanly) {
  TempDir d;
  auto opts = replay_options(d, "ablate-gri");
  opts.ablations = {"deep_researcher"};
  const auto qs = pick(load_questions(kBench / "questions.jsonl"), {"gri_101"});
  const auto result = run_benchmark(qs, load_config(kBench / "config.json"), opts);
  const auto lines = text::split_lines(read_file(result.run_dir / "trace-gri_101.jsonl"));
  const auto first = Json::parse(lines[0]);
  EXPECT_FALSE(first["ok"].get<bool>());
  EXPECT_EQ(first["error"]["kind"], "ToolDisabled");
  EXPECT_TRUE(first["artifacts"].empty());
  EXPECT_FALSE(fs::exists(result.run_dir / "work" / "gri_101" / "research_gri_101_research_01.md"));
}

TEST(RunBenchmarkTest, OneErroredQuestionDoesNotStopTheBatch) {
  TempDir d;
  auto qs = closed_questions();
  auto broken = qs[2];
  broken.id = "no_script";
  qs.insert(qs.begin() + 1, broken);
  const auto result = run_benchmark(qs, load_config(kBench / "config.json"), replay_options(d, "iso"));
  ASSERT_EQ(result.answers.size(), 5u);
  EXPECT_EQ(result.answers[1].status, "error");
  ASSERT_TRUE(result.answers[1].error);
  EXPECT_NE(result.answers[1].error->find("TranscriptExhausted"), std::string::npos);
  EXPECT_TRUE(result.any_error());
  std::size_t done = 0;
  for (const auto& a : result.answers) done += a.status == "done";
  EXPECT_EQ(done, 4u);
  EXPECT_FALSE(result.graded[1].correct);
}

TEST(RunBenchmarkTest, OutcomeIsIndependentOfBatch) {
  TempDir d;
  const auto config = load_config(kBench / "config.json");
  auto all = closed_questions();
  const auto alone = run_benchmark(pick(all, {"water_mc"}), config, replay_options(d, "alone"));
  std::reverse(all.begin(), all.end());
  auto opts = replay_options(d, "batch");
  opts.parallelism = 3;
  const auto batch = run_benchmark(all, config, opts);
  auto strip = [](AnswerRecord a) {
    a.duration_ms = 0;
    return to_json(a);
  };
  EXPECT_EQ(strip(alone.answers[0]), strip(batch.answers[0]));
  EXPECT_EQ(read_file(alone.run_dir / "trace-water_mc.jsonl").size() > 0, true);
}

TEST(RunBenchmarkTest, RepeatedRunsMatch) {
  TempDir d;
  const auto config = load_config(kBench / "config.json");
  const auto a = run_benchmark(closed_questions(), config, replay_options(d, "a"));
  auto opts = replay_options(d, "b");
  opts.parallelism = 4;
  const auto b = run_benchmark(closed_questions(), config, opts);
  EXPECT_EQ(untimed_answers(a.run_dir), untimed_answers(b.run_dir));
  EXPECT_EQ(read_file(a.run_dir / "eval" / "summary.csv"), read_file(b.run_dir / "eval" / "summary.csv"));
}

std::vector<AnswerRecord> answers_for(std::size_t n1, std::size_t n2) {
  std::vector<AnswerRecord> out;
  for (std::size_t i = 0; i < n1 + n2; ++i) {
    AnswerRecord a;
    a.question_id = "q" + std::to_string(i);
    a.level = i < n1 ? 1 : 2;
    a.status = "done";
    out.push_back(a);
  }
  return out;
}

std::vector<eval::GradedAnswer> grades_for(std::size_t c1, std::size_t n1, std::size_t c2, std::size_t n2) {
  std::vector<eval::GradedAnswer> out;
  for (std::size_t i = 0; i < n1 + n2; ++i) {
    const bool first = i < n1;
    const bool correct = first ? i < c1 : (i - n1) < c2;
    out.push_back({"q" + std::to_string(i), "x", "x", correct, first ? 1 : 2});
  }
  return out;
}

TEST(TabulateTest, ReproducesReferenceRows) {
  const auto full = tabulate("ESGAgent", answers_for(132, 114), grades_for(119, 132, 88, 114));
  const auto ablated = tabulate("ESGAgent-w/o-deep research", answers_for(132, 114), grades_for(117, 132, 75, 114));
  const auto md = results_markdown({full, ablated});
  EXPECT_NE(md.find("| ESGAgent | 119 | 90.15 | 88 | 77.19 | 84.15 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| ESGAgent-w/o-deep research | 117 | 88.64 | 75 | 65.79 | 78.05 |"), std::string::npos) << md;
  EXPECT_EQ(ablated.total->correct, 192u);
  EXPECT_EQ(ablated.total->n, 246u);
  EXPECT_NE(results_csv({full}).find("ESGAgent,119,132,90.15,88,114,77.19,207,246,84.15"), std::string::npos);
}

TEST(TabulateTest, EmptyAndInconsistentInputs) {
  const auto empty = tabulate("ESGAgent", {}, {});
  EXPECT_FALSE(empty.total);
  const auto md = results_markdown({empty});
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n'), 2);  // header only
  EXPECT_EQ(summary_csv(empty), "level,n,correct,acc_pct\n");

  auto answers = answers_for(2, 1);
  auto graded = grades_for(1, 2, 1, 1);
  graded.pop_back();
  EXPECT_EQ(kind_of([&] { tabulate("x", answers, graded); }), ErrorKind::kInconsistentCounts);
  graded = grades_for(1, 2, 1, 1);
  graded.push_back(graded[0]);
  EXPECT_EQ(kind_of([&] { tabulate("x", answers, graded); }), ErrorKind::kInconsistentCounts);

  ResultsRow forged;
  forged.label = "x";
  forged.total = eval::LevelAccuracy{0, 10, 5, 51.0};
  EXPECT_EQ(kind_of([&] { results_markdown({forged}); }), ErrorKind::kInconsistentCounts);
}

TEST(TabulateTest, PersistedRunReproducesTheTableBytes) {
  TempDir d;
  const auto result = run_benchmark(closed_questions(), load_config(kBench / "config.json"), replay_options(d, "t"));
  const auto run = load_run(result.run_dir);
  EXPECT_EQ(run.answers.size(), 4u);
  EXPECT_EQ(run.questions.size(), 4u);
  const auto again = results_markdown({tabulate(run.manifest.label, run.answers, run.graded)});
  EXPECT_EQ(again, read_file(result.run_dir / "results.md"));
}

struct Level3Fixture {
  Level3Fixture() {
    config = load_config(kBench / "config.json");
    const auto qs = pick(load_questions(kBench / "questions.jsonl"), {"bio_report", "waci_a"});
    const auto r = run_benchmark(qs, config, replay_options(dir, "l3"));
    run_dir = r.run_dir;
  }
  fs::path script(const std::string& name, const std::vector<std::string>& replies) {
    std::string body;
    for (const auto& reply : replies) body += Json({{"response", reply}}).dump() + "\n";
    const auto p = dir.path() / (name + ".jsonl");
    write_file(p, body);
    return p;
  }
  TempDir dir;
  BenchConfig config;
  fs::path run_dir;
};

std::string scores(double rich) {
  return Json({{"richness", rich}, {"completeness", 7}, {"depth", 6}, {"coherence", 7.5}, {"professionalism", 7.25},
               {"expressiveness", 5.75}})
      .dump();
}

TEST(EvaluateTest, FourJudgeEnsemble) {
  Level3Fixture f;
  const GatewayFactory judges(f.config, kBench / "judge_replay");
  const auto s = evaluate_level3(f.run_dir, f.config.judges, judges);
  EXPECT_TRUE(s.errors.empty());
  ASSERT_EQ(s.rows.size(), 5u);
  const auto& ens = s.rows.back();
  EXPECT_EQ(ens.judge, "ensemble");
  EXPECT_EQ(eval::format_fixed(ens.dims->richness(), 3), "6.875");
  ASSERT_TRUE(ens.citations);
  EXPECT_EQ(ens.citations->c, 3u);
  EXPECT_EQ(ens.citations->c_cor, 2u);
  EXPECT_LE(ens.citations->faithfulness, ens.citations->correctness);
  ASSERT_TRUE(ens.overall);
  const auto csv = read_file(f.run_dir / "eval" / "level3_scores.csv");
  EXPECT_NE(csv.find("bio_report,ensemble,6.875,"), std::string::npos) << csv;
  EXPECT_TRUE(fs::exists(f.run_dir / "eval" / "level3_summary.md"));
  EXPECT_NE(s.markdown.find("| Level 3 (1 questions) | Corr. | Faith. | Rich."), std::string::npos);
  EXPECT_EQ(text::split_lines(read_file(f.run_dir / "eval" / "judgments.jsonl")).size() >= 7, true);
}

TEST(EvaluateTest, SingleJudgeEnsembleEqualsTheJudge) {
  Level3Fixture f;
  const auto path = f.script("one", {"{\"verdict\":\"supported\"}", "{\"verdict\":\"supported\"}",
                                     "{\"verdict\":\"supported\"}", scores(7.5)});
  const GatewayFactory g(f.config, path);
  const auto s = evaluate_level3(f.run_dir, {"judge:a"}, g);
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_EQ(s.rows[0].dims, s.rows[1].dims);
  EXPECT_DOUBLE_EQ(s.rows[1].citations->correctness, 1.0);
}

TEST(EvaluateTest, ReportWithoutReferencesKeepsDimensions) {
  Level3Fixture f;
  write_file(f.run_dir / "reports" / "bio_report" / "report.md", "# Report\n\nNo sources at all.\n");
  const GatewayFactory g(f.config, f.script("plain", {scores(6.0)}));
  const auto s = evaluate_level3(f.run_dir, {"judge:a"}, g);
  ASSERT_EQ(s.rows.size(), 2u);
  EXPECT_FALSE(s.rows[1].citations);
  EXPECT_FALSE(s.rows[1].overall);
  EXPECT_DOUBLE_EQ(s.rows[1].dims->richness(), 6.0);
  EXPECT_NE(read_file(f.run_dir / "eval" / "level3_scores.csv").find("bio_report,ensemble,6.000,7.000,6.000,7.500,7.250,5.750,,,\n"),
            std::string::npos);
}

TEST(EvaluateTest, MissingReportsAndJudges) {
  Level3Fixture f;
  const GatewayFactory g(f.config, kBench / "judge_replay");
  EXPECT_EQ(kind_of([&] { evaluate_level3(f.run_dir, {}, g); }), ErrorKind::kNoJudges);
  fs::remove(f.run_dir / "reports" / "bio_report" / "report.md");
  EXPECT_EQ(kind_of([&] { evaluate_level3(f.run_dir, {"judge:a"}, g); }), ErrorKind::kMissingReport);

  TempDir d;
  const auto closed = run_benchmark(closed_questions(), f.config, replay_options(d, "closed"));
  EXPECT_EQ(kind_of([&] { evaluate_level3(closed.run_dir, {"judge:a"}, g); }), ErrorKind::kMissingReport);
}

int cli(const std::vector<std::string>& args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

TEST(CliTest, ExitCodes) {
  TempDir d;
  const auto runs = (d.path() / "runs").string();
  const auto cfg = (kBench / "config.json").string();
  const auto replay = (kBench / "replay").string();
  std::string out, err;

  EXPECT_EQ(cli({"run-bench", (kBench / "empty.jsonl").string(), "--config", cfg, "--replay", replay, "--runs-dir", runs},
                nullptr, &err),
            2);
  EXPECT_NE(err.find("Usage"), std::string::npos);
  EXPECT_EQ(cli({}, nullptr, &err), 2);
  EXPECT_EQ(cli({"run-bench"}), 2);
  EXPECT_EQ(cli({"run-bench", (kBench / "questions_closed.jsonl").string(), "--parallel", "0"}), 2);
  EXPECT_EQ(cli({"run-bench", (kBench / "questions_closed.jsonl").string(), "--ablate", "teleport", "--replay", replay,
                 "--runs-dir", runs}),
            2);

  EXPECT_EQ(cli({"run-bench", (kBench / "questions_closed.jsonl").string(), "--config", cfg, "--replay", replay,
                 "--runs-dir", runs, "--run-id", "ok", "--parallel", "2"},
                &out),
            0);
  EXPECT_TRUE(fs::exists(d.path() / "runs" / "ok" / "eval" / "summary.csv"));
  EXPECT_NE(out.find("| ESGAgent | 1 | 100.00 | 1 | 100.00 | 100.00 |"), std::string::npos) << out;

  EXPECT_EQ(cli({"run-bench", (kBench / "questions_with_error.jsonl").string(), "--config", cfg, "--replay", replay,
                 "--runs-dir", runs, "--run-id", "err"}),
            1);
  const auto answers = text::split_lines(read_file(d.path() / "runs" / "err" / "answers.jsonl"));
  EXPECT_EQ(std::count_if(answers.begin(), answers.end(), [](const auto& l) { return !text::trim(l).empty(); }), 2);

  EXPECT_EQ(cli({"tabulate", (d.path() / "runs" / "ok").string()}, &out), 0);
  EXPECT_EQ(out, read_file(d.path() / "runs" / "ok" / "results.md"));
}

TEST(CliTest, StatsCapsAndAsk) {
  TempDir d;
  const auto report = d.path() / "r.md";
  write_file(report,
             "# T\n\nA [1](u1) b [2](u2) c [3](u3).\n\n![c1](a.png)\n\n## References\n\n[1](u1) one\n\n[2](u2) two\n");
  std::string out;
  EXPECT_EQ(cli({"stats", report.string()}, &out), 0);
  EXPECT_NE(out.find(report.string() + ",8,1,2,3\n"), std::string::npos) << out;

  EXPECT_EQ(cli({"caps", (kBench / "questions.jsonl").string()}, &out), 0);
  EXPECT_NE(out.find("\n1,2,1.500,2,"), std::string::npos) << out;
  EXPECT_NE(out.find("\n3,1,3.000,3,"), std::string::npos) << out;

  const auto work = d.path() / "ask";
  EXPECT_EQ(cli({"ask", "GRI 101: Biodiversity 2024 replaces GRI 304.", "--config", (kBench / "config.json").string(),
                 "--replay", (kBench / "replay" / "gri_304_tf.jsonl").string(), "--workdir", work.string()},
                &out),
            0);
  EXPECT_NE(out.find("answer: True"), std::string::npos) << out;
  EXPECT_TRUE(fs::exists(work / "trace.jsonl"));
}

TEST(CliTest, IngestBuildsALoadableIndex) {
  TempDir d;
  const auto out_dir = d.path() / "index";
  std::string out;
  EXPECT_EQ(cli({"ingest", (kBench / "corpus").string(), "--out", out_dir.string()}, &out), 0);
  const auto index = retrieval::KnowledgeIndex::load(out_dir);
  EXPECT_EQ(index.documents().size(), 3u);
  EXPECT_FALSE(index.empty());
}

}  // namespace
}  // namespace esg::bench
