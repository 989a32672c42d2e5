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

#include "esg/bench/harness.hpp"
#include "esg/common/error.hpp"
#include "esg/common/text.hpp"

namespace esg::bench {

namespace {

struct RunEvidence {
  std::set<std::string> retrieved;
  std::set<std::string> before_report;
  std::map<std::string, std::string> text_by_uri;
};

std::optional<std::size_t> report_step(const fs::path& trace_file) {
  std::optional<std::size_t> step;
  if (!fs::exists(trace_file)) return step;
  for (const auto& line : text::split_lines(read_file(trace_file))) {
    if (text::trim(line).empty()) continue;
    const auto j = Json::parse(line);
    if (j.value("ok", false) && j.contains("tool_call") && j["tool_call"].is_object() &&
        j["tool_call"].value("tool", std::string()) == "report") {
      step = j.value("index", std::size_t{0});
    }
  }
  return step;
}

RunEvidence load_evidence(const fs::path& run_dir, const std::string& key) {
  RunEvidence ev;
  const auto cutoff = report_step(run_dir / ("trace-" + key + ".jsonl"));
  const auto file = run_dir / ("evidence-" + key + ".jsonl");
  if (!fs::exists(file)) return ev;
  for (const auto& line : text::split_lines(read_file(file))) {
    if (text::trim(line).empty()) continue;
    const auto j = Json::parse(line);
    const auto uri = j.value("uri", std::string());
    if (uri.empty()) continue;
    ev.retrieved.insert(uri);
    if (!cutoff || j.value("step", std::size_t{0}) < *cutoff) ev.before_report.insert(uri);
    auto& text = ev.text_by_uri[uri];
    if (text.empty()) text = j.value("text", std::string());
  }
  return ev;
}

std::string num(const std::optional<double>& v) { return v ? eval::format_fixed(*v, 3) : ""; }

Json judgment_json(const std::string& qid, const eval::CitationJudgment& j) {
  return {{"question_id", qid},         {"kind", "citation"},
          {"claim", j.claim},           {"index", j.citation_index},
          {"uri", j.evidence.uri},      {"in_retrieved_set", j.in_retrieved_set},
          {"used_before_report", j.used_before_report},
          {"correct", j.correct},       {"faithful", j.faithful},
          {"causality_approximated", j.causality_approximated}};
}

std::string level3_csv(const std::vector<Level3Row>& rows) {
  std::ostringstream s;
  s << "question_id,judge,rich,comp,depth,coh,prof,expr,corr,faith,overall\n";
  for (const auto& r : rows) {
    s << r.question_id << "," << r.judge;
    for (std::size_t i = 0; i < 6; ++i) s << "," << (r.dims ? eval::format_fixed(r.dims->values[i], 3) : "");
    s << "," << (r.citations ? num(r.citations->correctness) : "") << ","
      << (r.citations ? num(r.citations->faithfulness) : "") << "," << num(r.overall) << "\n";
  }
  return s.str();
}

std::string level3_markdown(const std::string& label, const std::vector<Level3Row>& rows) {
  std::size_t questions = 0;
  std::array<double, 6> dim_sum{};
  double corr = 0, faith = 0, overall = 0;
  std::size_t cited = 0, with_overall = 0;
  std::ostringstream detail;
  for (const auto& r : rows) {
    if (r.judge != "ensemble") continue;
    ++questions;
    for (std::size_t i = 0; i < 6; ++i) dim_sum[i] += r.dims->values[i];
    if (r.citations) {
      ++cited;
      corr += r.citations->correctness;
      faith += r.citations->faithfulness;
    }
    if (r.overall) {
      ++with_overall;
      overall += *r.overall;
    }
    detail << "| " << r.question_id << " | " << (r.citations ? num(r.citations->correctness) : "-") << " | "
           << (r.citations ? num(r.citations->faithfulness) : "-");
    for (double v : r.dims->values) detail << " | " << eval::format_fixed(v, 3);
    detail << " | " << (r.overall ? num(r.overall) : "-") << " |\n";
  }
  const char* header = " | Corr. | Faith. | Rich. | Comp. | Depth | Coh. | Prof. | Expr. | Avg. |\n";
  const char* rule = "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  std::ostringstream s;
  s << "| Level 3 (" << questions << " questions)" << header << rule;
  if (questions > 0) {
    const double n = static_cast<double>(questions);
    s << "| " << label << " | " << (cited ? eval::format_fixed(corr / static_cast<double>(cited), 3) : "-") << " | "
      << (cited ? eval::format_fixed(faith / static_cast<double>(cited), 3) : "-");
    for (double v : dim_sum) s << " | " << eval::format_fixed(v / n, 3);
    s << " | " << (with_overall ? eval::format_fixed(overall / static_cast<double>(with_overall), 3) : "-") << " |\n";
    s << "\n| Question" << header << rule << detail.str();
  }
  return s.str();
}

}  // namespace

Level3Summary evaluate_level3(const fs::path& run_dir, const std::vector<std::string>& judges,
                              const GatewayFactory& gateways) {
  if (judges.empty()) throw Error(ErrorKind::kNoJudges, "at least one judge role is required");
  const auto run = load_run(run_dir);
  std::map<std::string, const Question*> questions;
  for (const auto& q : run.questions) questions[q.id] = &q;

  Level3Summary summary;
  std::string judgments;
  std::size_t level3 = 0, reports = 0;
  for (const auto& a : run.answers) {
    if (a.level != 3) continue;
    ++level3;
    if (!a.report || !fs::exists(run_dir / *a.report)) {
      summary.errors[a.question_id] = "MissingReport: the run produced no report for this question";
      continue;
    }
    ++reports;
    const auto key = tools::sanitize_id(a.question_id);
    const auto markdown = read_file(run_dir / *a.report);
    const auto qit = questions.find(a.question_id);
    const std::string question = qit == questions.end() ? std::string() : qit->second->question;
    auto gateway = gateways.make(a.question_id);

    std::optional<eval::CitationScores> cites;
    try {
      const auto pairs = eval::extract_citations(markdown);
      if (!pairs.empty()) {
        const auto ev = load_evidence(run_dir, key);
        std::map<int, eval::EvidenceDoc> store;
        for (const auto& ref : eval::parse_references(markdown)) {
          const auto it = ev.text_by_uri.find(ref.uri);
          const bool known = it != ev.text_by_uri.end() && !it->second.empty();
          store[ref.index] = {ref.uri, known ? it->second : ref.label};
        }
        std::vector<eval::CitationJudgment> list;
        for (const auto& p : pairs) {
          list.push_back(eval::judge_citation(*gateway, p, store, ev.retrieved, ev.before_report));
          judgments += dump_line(judgment_json(a.question_id, list.back())) + "\n";
        }
        cites = eval::citation_scores(list);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kMalformedReport) {
        summary.errors[a.question_id] = std::string(to_string(e.kind())) + ": " + e.what();
        continue;
      }
    }

    std::map<std::string, eval::DimensionScores> per_judge;
    std::vector<Level3Row> rows;
    try {
      for (const auto& judge : judges) {
        const auto verdict = eval::judge_dimensions(*gateway, markdown, question, judge);
        per_judge[judge] = verdict.scores;
        Level3Row row{a.question_id, judge, verdict.scores, cites, std::nullopt};
        if (cites) row.overall = eval::overall_average(cites->correctness, cites->faithfulness, verdict.scores);
        rows.push_back(row);
        Json jj = {{"question_id", a.question_id}, {"kind", "dimensions"}, {"judge", judge},
                   {"justification", verdict.justification}};
        for (std::size_t i = 0; i < 6; ++i) jj[eval::DimensionScores::kNames[i]] = verdict.scores.values[i];
        judgments += dump_line(jj) + "\n";
      }
    } catch (const Error& e) {
      summary.errors[a.question_id] = std::string(to_string(e.kind())) + ": " + e.what();
      continue;
    }
    const auto mean = eval::ensemble_mean(per_judge);
    Level3Row ens{a.question_id, "ensemble", mean, cites, std::nullopt};
    if (cites) ens.overall = eval::overall_average(cites->correctness, cites->faithfulness, mean);
    rows.push_back(ens);
    summary.rows.insert(summary.rows.end(), rows.begin(), rows.end());
  }
  if (level3 == 0 || reports == 0) throw Error(ErrorKind::kMissingReport, "the run holds no level-3 reports");

  summary.markdown = level3_markdown(run.manifest.label, summary.rows);
  fs::create_directories(run_dir / "eval");
  write_file(run_dir / "eval" / "level3_scores.csv", level3_csv(summary.rows));
  write_file(run_dir / "eval" / "level3_summary.md", summary.markdown);
  write_file(run_dir / "eval" / "judgments.jsonl", judgments);
  return summary;
}

}  // namespace esg::bench
