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

#include <cmath>
#include <sstream>

#include "esg/common/error.hpp"
#include "esg/common/fenced.hpp"
#include "esg/common/text.hpp"
#include "esg/eval/evaluator.hpp"

namespace esg::eval {

namespace {

llm::ChatResponse ask(llm::Gateway& gateway, const std::string& role, std::vector<llm::ChatMessage> messages) {
  llm::ChatRequest req;
  req.model_role = role;
  req.temperature = llm::default_temperature(role);
  req.messages = std::move(messages);
  return gateway.complete(req);
}

constexpr const char* kCitationPrompt =
    "You verify citations in an ESG report. Decide whether the source text semantically entails the claim: "
    "every fact in the claim must be stated in or follow from the source. Reply with JSON "
    "{\"verdict\": \"supported\" or \"unsupported\", \"reason\": \"one sentence\"}.";

bool parse_support(const std::string& reply) {
  if (const auto j = find_json(reply); j && j->is_object() && j->contains("verdict") && (*j)["verdict"].is_string()) {
    return text::to_lower(text::trim((*j)["verdict"].get<std::string>())) == "supported";
  }
  const auto lower = text::to_lower(reply);
  if (lower.find("unsupported") != std::string::npos || lower.find("not supported") != std::string::npos) return false;
  return lower.find("supported") != std::string::npos;
}

const EvidenceDoc* resolve(const std::map<int, EvidenceDoc>& store, int index) {
  const auto it = store.find(index);
  return it == store.end() ? nullptr : &it->second;
}

}  // namespace

CitationJudgment judge_citation(llm::Gateway& gateway, const CitationPair& pair,
                                const std::map<int, EvidenceDoc>& evidence_store,
                                const std::set<std::string>& retrieved,
                                const std::set<std::string>& used_before_report, const std::string& judge_role) {
  CitationJudgment j;
  j.claim = pair.claim;
  j.citation_index = pair.index;
  const auto* ev = resolve(evidence_store, pair.index);
  if (!ev) {
    j.evidence = {pair.uri, ""};
    return j;
  }
  j.evidence = *ev;
  j.in_retrieved_set = retrieved.count(ev->uri) != 0;
  j.used_before_report = used_before_report.count(ev->uri) != 0;
  std::ostringstream user;
  user << "Claim: " << pair.claim << "\n\nSource <" << ev->uri << ">:\n" << text::truncate(ev->text, 6000);
  const auto reply = ask(gateway, judge_role, {llm::ChatMessage::system(kCitationPrompt), llm::ChatMessage::user(user.str())});
  j.correct = parse_support(reply.content);
  j.faithful = j.correct && j.in_retrieved_set && j.used_before_report;
  return j;
}

CitationScores citation_scores(const std::vector<CitationJudgment>& judgments) {
  if (judgments.empty()) throw Error(ErrorKind::kNoCitations, "the report contains no citations");
  CitationScores s;
  s.c = judgments.size();
  for (const auto& j : judgments) {
    if (!j.correct) continue;
    ++s.c_cor;
    if (j.faithful) ++s.c_faith;
  }
  s.correctness = static_cast<double>(s.c_cor) / static_cast<double>(s.c);
  s.faithfulness = static_cast<double>(s.c_faith) / static_cast<double>(s.c);
  return s;
}

std::string evaluation_prompt() {
  return "You are a senior ESG analyst grading a generated ESG research report against the user's task. "
         "Score each dimension from 0 to 10 (decimals allowed):\n"
         "- richness: density of domain-specific facts, figures and data points.\n"
         "- completeness: coverage of the full breadth of the standard ESG frameworks relevant to the task.\n"
         "- depth: logical causal chains linking evidence to conclusions rather than listing facts.\n"
         "- coherence: seamless transitions and a consistent structure from section to section.\n"
         "- professionalism: correct use of domain-specific terminology, standards and metrics.\n"
         "- expressiveness: how intuitively tables and charts convey complex quantitative trends.\n"
         "Reply with one JSON object: {\"richness\": x, \"completeness\": x, \"depth\": x, \"coherence\": x, "
         "\"professionalism\": x, \"expressiveness\": x, \"justification\": \"...\"}.";
}

namespace {

struct Parsed {
  std::optional<JudgeVerdict> verdict;
  std::string problem;
};

std::optional<double> number_at(const Json& obj, std::size_t i) {
  for (const char* key : {DimensionScores::kNames[i], DimensionScores::kShort[i]}) {
    for (const auto& k : {std::string(key), std::string(1, static_cast<char>(std::toupper(key[0]))) + (key + 1)}) {
      if (!obj.contains(k)) continue;
      const auto& v = obj[k];
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) {
        try {
          std::size_t used = 0;
          const double d = std::stod(v.get<std::string>(), &used);
          if (used == text::trim(v.get<std::string>()).size()) return d;
        } catch (const std::exception&) {
        }
      }
    }
  }
  return std::nullopt;
}

Parsed parse_scores(const std::string& reply) {
  auto j = find_json(reply);
  if (!j || !j->is_object()) return {std::nullopt, "the reply holds no JSON object"};
  Json scores = j->contains("scores") && (*j)["scores"].is_object() ? (*j)["scores"] : *j;
  JudgeVerdict v;
  std::string problem;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto n = number_at(scores, i);
    if (!n) {
      problem += std::string(problem.empty() ? "" : "; ") + DimensionScores::kNames[i] + " is missing";
    } else if (!std::isfinite(*n) || *n < 0.0 || *n > 10.0) {
      problem += std::string(problem.empty() ? "" : "; ") + DimensionScores::kNames[i] + " is outside 0..10";
    } else {
      v.scores.values[i] = *n;
    }
  }
  if (!problem.empty()) return {std::nullopt, problem};
  v.justification = j->value("justification", std::string());
  if (v.justification.empty()) v.justification = text::trim(reply);
  return {v, {}};
}

}  // namespace

JudgeVerdict judge_dimensions(llm::Gateway& gateway, const std::string& report_markdown, const std::string& question,
                              const std::string& judge_role) {
  std::vector<llm::ChatMessage> messages = {
      llm::ChatMessage::system(evaluation_prompt()),
      llm::ChatMessage::user("Task:\n" + question + "\n\nReport:\n" + report_markdown)};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto reply = ask(gateway, judge_role, messages);
    auto parsed = parse_scores(reply.content);
    if (parsed.verdict) return *parsed.verdict;
    if (attempt == 1) {
      throw Error(ErrorKind::kJudgeFormatError, "judge '" + judge_role + "' returned unusable scores: " + parsed.problem);
    }
    messages.push_back(llm::ChatMessage::assistant(reply.content.empty() ? "(empty)" : reply.content));
    messages.push_back(llm::ChatMessage::user("Your scores were not usable (" + parsed.problem +
                                              "). Reply again with the JSON object only, every score between 0 and 10."));
  }
  throw Error(ErrorKind::kJudgeFormatError, "unreachable");
}

DimensionScores ensemble_mean(const std::map<std::string, DimensionScores>& per_judge) {
  if (per_judge.empty()) throw Error(ErrorKind::kNoJudges, "no judge scores to average");
  DimensionScores mean;
  for (std::size_t i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (const auto& [judge, s] : per_judge) sum += s.values[i];
    mean.values[i] = sum / static_cast<double>(per_judge.size());
  }
  return mean;
}

double overall_average(double correctness, double faithfulness, const DimensionScores& dims) {
  double sum = 10.0 * correctness + 10.0 * faithfulness;
  for (double v : dims.values) sum += v;
  return sum / 8.0;
}

}  // namespace esg::eval
