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

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

#include "esg/bench/harness.hpp"
#include "esg/common/error.hpp"
#include "esg/common/text.hpp"

namespace esg::bench {

namespace {

bool usage_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::kUsageError:
    case ErrorKind::kConfigError:
    case ErrorKind::kSchemaError:
    case ErrorKind::kDuplicateId:
    case ErrorKind::kMissingAttachment:
    case ErrorKind::kUnknownToolName:
      return true;
    default:
      return false;
  }
}

struct Common {
  std::string config;
  std::string replay;
  std::string fixtures;
  std::string index;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "Configuration file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--replay", c.replay, "Scripted transcript file, or a directory of <question-id>.jsonl")
      ->check(CLI::ExistingPath);
  cmd->add_option("--fixtures", c.fixtures, "Search fixture file (JSONL)")->check(CLI::ExistingFile);
  cmd->add_option("--index", c.index, "Knowledge index directory")->check(CLI::ExistingDirectory);
}

BenchConfig resolve_config(const Common& c) {
  auto config = c.config.empty() ? parse_config(Json::object(), fs::current_path()) : load_config(c.config);
  if (!c.fixtures.empty()) config.search_fixtures = fs::absolute(c.fixtures);
  if (!c.index.empty()) config.index_dir = fs::absolute(c.index);
  return config;
}

std::optional<fs::path> replay_path(const Common& c) {
  if (c.replay.empty()) return std::nullopt;
  return fs::absolute(c.replay);
}

int cmd_ingest(const std::string& dir, const std::string& out_dir, const Common& c, bool graph, std::ostream& out) {
  const auto config = resolve_config(c);
  const GatewayFactory factory(config, replay_path(c));
  auto gateway = factory.make("ingest");
  auto index = build_index(dir, config.chunking, *gateway);
  if (graph) index.build_graph(*gateway);
  index.save(out_dir);
  out << "indexed " << index.documents().size() << " documents, " << index.chunks().size() << " chunks into "
      << out_dir << "\n";
  return 0;
}

int cmd_ask(const std::string& query, const std::vector<std::string>& attach, const std::string& workdir,
            const Common& c, std::ostream& out) {
  const auto config = resolve_config(c);
  const auto env = make_environment(config);
  const GatewayFactory factory(config, replay_path(c));
  auto gateway = factory.make("ask");
  agent::RunRequest req{query, {}, workdir.empty() ? fs::current_path() / "ask-work" : fs::path(workdir)};
  for (const auto& a : attach) req.attachments.push_back(fs::absolute(a));
  const auto outcome = agent::run(req, config.agent, *gateway, env);
  std::string trace;
  for (const auto& s : outcome.trace) trace += dump_line(agent::to_json(s)) + "\n";
  write_file(req.workdir / "trace.jsonl", trace);
  out << "status: " << agent::to_string(outcome.status) << "\n";
  if (outcome.final_answer) out << "answer: " << *outcome.final_answer << "\n";
  if (outcome.report_path) out << "report: " << outcome.report_path->string() << "\n";
  if (outcome.error) out << "error: " << to_string(outcome.error->kind) << ": " << outcome.error->message << "\n";
  return outcome.status == agent::RunStatus::kError ? 1 : 0;
}

int cmd_run_bench(const std::string& questions_file, const std::vector<std::string>& ablate, std::size_t parallel,
                  const std::string& runs_dir, const std::string& run_id, const Common& c, std::ostream& out) {
  const auto questions = load_questions(questions_file);
  if (questions.empty()) throw Error(ErrorKind::kUsageError, "the question file holds no questions");
  const auto config = resolve_config(c);
  RunOptions opts;
  opts.ablations = {ablate.begin(), ablate.end()};
  opts.parallelism = parallel;
  opts.runs_dir = runs_dir;
  if (!run_id.empty()) opts.run_id = run_id;
  opts.replay = replay_path(c);
  opts.question_set_digest = sha256_hex(read_file(questions_file));
  const auto result = run_benchmark(questions, config, opts);
  out << "run: " << result.run_dir.string() << "\n" << read_file(result.run_dir / "results.md");
  for (const auto& a : result.answers) {
    if (a.status == "error") out << "error in " << a.question_id << ": " << a.error.value_or("unknown") << "\n";
  }
  return result.any_error() ? 1 : 0;
}

int cmd_evaluate(const std::string& run_dir, std::vector<std::string> judges, const Common& c, std::ostream& out) {
  auto config = resolve_config(c);
  if (judges.empty()) judges = config.judges;
  for (const auto& j : judges) {
    if (std::find(config.judges.begin(), config.judges.end(), j) == config.judges.end()) config.judges.push_back(j);
  }
  const GatewayFactory factory(config, replay_path(c));
  const auto summary = evaluate_level3(run_dir, judges, factory);
  out << summary.markdown;
  for (const auto& [qid, msg] : summary.errors) out << "error in " << qid << ": " << msg << "\n";
  return summary.errors.empty() ? 0 : 1;
}

int cmd_stats(const std::vector<std::string>& files, std::ostream& out) {
  out << "report,words,charts,refs,cites\n";
  for (const auto& f : files) {
    const auto st = eval::report_statistics(read_file(f));
    out << f << "," << st.words << "," << st.charts << "," << st.refs << "," << st.cites << "\n";
  }
  return 0;
}

int cmd_caps(const std::string& questions_file, std::ostream& out) {
  std::vector<eval::CapabilityTags> tags;
  for (const auto& q : load_questions(questions_file)) tags.push_back({q.level, q.capabilities});
  out << "level,questions,avg_per_question,max_per_question";
  for (int i = 1; i <= 10; ++i) out << ",c" << i;
  out << "\n";
  for (const auto& [level, p] : eval::capability_distribution(tags)) {
    out << level << "," << p.questions << "," << eval::format_fixed(p.avg_per_question, 3) << "," << p.max_per_question;
    for (double f : p.frequency) out << "," << eval::format_fixed(f, 3);
    out << "\n";
  }
  return 0;
}

int cmd_tabulate(const std::vector<std::string>& dirs, const std::string& out_file, std::ostream& out) {
  std::vector<ResultsRow> rows;
  for (const auto& d : dirs) {
    const auto run = load_run(d);
    rows.push_back(tabulate(run.manifest.label, run.answers, run.graded));
  }
  const auto md = results_markdown(rows);
  if (!out_file.empty()) {
    write_file(out_file, md);
    write_file(fs::path(out_file).replace_extension(".csv"), results_csv(rows));
  }
  out << md;
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ESG research agent and benchmark harness", "esg"};
  app.require_subcommand(1);

  Common common;
  std::string dir, out_dir, query, workdir, questions, runs_dir = "runs", run_id, run_dir, tab_out;
  std::vector<std::string> attach, ablate, judges, reports, run_dirs;
  std::size_t parallel = 1;
  bool graph = false;

  auto* ingest = app.add_subcommand("ingest", "Build a knowledge index from a corpus directory");
  ingest->add_option("dir", dir, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  ingest->add_option("--out", out_dir, "Index output directory")->required();
  ingest->add_flag("--graph", graph, "Also extract the entity graph (uses the extractor role)");
  add_common(ingest, common);

  auto* ask = app.add_subcommand("ask", "Answer a single query with the agent");
  ask->add_option("query", query, "The query")->required();
  ask->add_option("--attach", attach, "Attachment file (repeatable)")->check(CLI::ExistingFile);
  ask->add_option("--workdir", workdir, "Working directory for the run");
  add_common(ask, common);

  auto* bench = app.add_subcommand("run-bench", "Run a question set and grade levels 1 and 2");
  bench->add_option("questions", questions, "Question file (JSONL)")->required()->check(CLI::ExistingFile);
  bench->add_option("--ablate", ablate, "Disable a tool (repeatable)");
  bench->add_option("--parallel", parallel, "Questions in flight at once")->check(CLI::PositiveNumber);
  bench->add_option("--runs-dir", runs_dir, "Parent directory for run outputs");
  bench->add_option("--run-id", run_id, "Run identifier (default: timestamp)");
  add_common(bench, common);

  auto* evaluate = app.add_subcommand("evaluate", "Judge the level-3 reports of a run");
  evaluate->add_option("run_dir", run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--judge", judges, "Judge role (repeatable; default: judges from the config)");
  add_common(evaluate, common);

  auto* stats = app.add_subcommand("stats", "Word, chart, reference and citation counts of reports");
  stats->add_option("reports", reports, "Markdown reports")->required()->check(CLI::ExistingFile);

  auto* caps = app.add_subcommand("caps", "Capability distribution of a question set");
  caps->add_option("questions", questions, "Question file (JSONL)")->required()->check(CLI::ExistingFile);

  auto* tab = app.add_subcommand("tabulate", "Re-emit the accuracy table from persisted runs");
  tab->add_option("run_dirs", run_dirs, "Run directories")->required()->check(CLI::ExistingDirectory);
  tab->add_option("--out", tab_out, "Also write the markdown (and a .csv sibling) here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    err << app.help();
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(dir, out_dir, common, graph, out);
    if (*ask) return cmd_ask(query, attach, workdir, common, out);
    if (*bench) return cmd_run_bench(questions, ablate, parallel, runs_dir, run_id, common, out);
    if (*evaluate) return cmd_evaluate(run_dir, judges, common, out);
    if (*stats) return cmd_stats(reports, out);
    if (*caps) return cmd_caps(questions, out);
    if (*tab) return cmd_tabulate(run_dirs, tab_out, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    if (usage_kind(e.kind())) {
      err << app.help();
      return 2;
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace esg::bench
