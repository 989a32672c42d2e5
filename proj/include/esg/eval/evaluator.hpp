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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "esg/llm/gateway.hpp"

namespace esg::eval {

enum class QuestionType { kTf, kMc, kFib, kOpen };
std::string_view to_string(QuestionType type);
QuestionType question_type_from_string(std::string_view s);  // SchemaError on anything else

// Throws Unnormalizable for an mc answer without a leading letter.
std::string normalize_answer(std::string_view raw, QuestionType type);
bool grade_closed(std::string_view predicted, std::string_view gold, QuestionType type);

// Half-up rounding with a guard against binary representation error
// (7.1415 is stored as 7.14149999...).
double round_half_up(double value, int decimals);
std::string format_fixed(double value, int decimals);
// 100 * correct / n rounded half-up to two decimals, in exact integer arithmetic.
double percent_half_up(std::size_t correct, std::size_t n);

struct GradedAnswer {
  std::string question_id;
  std::string predicted;
  std::string gold;
  bool correct = false;
  int level = 1;
};

struct LevelAccuracy {
  int level = 0;  // 0 for the pooled total
  std::size_t n = 0;
  std::size_t correct = 0;
  double acc_pct = 0.0;
};

struct AccuracySummary {
  std::vector<LevelAccuracy> levels;  // levels without questions are omitted
  std::optional<LevelAccuracy> total;
};

AccuracySummary accuracy_summary(const std::vector<GradedAnswer>& graded);

struct Reference {
  int index = 0;
  std::string uri;
  std::string label;
};

struct CitationPair {
  std::string claim;
  int index = 0;
  std::string uri;
};

// Throws MalformedReport when there is no "## References" section.
std::vector<CitationPair> extract_citations(std::string_view report_markdown);
std::vector<Reference> parse_references(std::string_view report_markdown);

struct EvidenceDoc {
  std::string uri;
  std::string text;
};

struct CitationJudgment {
  std::string claim;
  int citation_index = 0;
  EvidenceDoc evidence;
  bool in_retrieved_set = false;
  bool used_before_report = false;
  bool correct = false;
  bool faithful = false;
  bool causality_approximated = true;
};

// `retrieved` is the run's retrieved set A; `used_before_report` the uris
// surfaced by tool calls before the report was written.
CitationJudgment judge_citation(llm::Gateway& gateway, const CitationPair& pair,
                                const std::map<int, EvidenceDoc>& evidence_store,
                                const std::set<std::string>& retrieved,
                                const std::set<std::string>& used_before_report,
                                const std::string& judge_role = "citation_judge");

struct CitationScores {
  std::size_t c = 0;
  std::size_t c_cor = 0;
  std::size_t c_faith = 0;
  double correctness = 0.0;
  double faithfulness = 0.0;
};

// Throws NoCitations for an empty list.
CitationScores citation_scores(const std::vector<CitationJudgment>& judgments);

struct DimensionScores {
  static constexpr std::array<const char*, 6> kNames = {"richness", "completeness", "depth",
                                                        "coherence", "professionalism", "expressiveness"};
  static constexpr std::array<const char*, 6> kShort = {"rich", "comp", "depth", "coh", "prof", "expr"};
  std::array<double, 6> values{};

  double richness() const { return values[0]; }
  double completeness() const { return values[1]; }
  double depth() const { return values[2]; }
  double coherence() const { return values[3]; }
  double professionalism() const { return values[4]; }
  double expressiveness() const { return values[5]; }
  friend bool operator==(const DimensionScores&, const DimensionScores&) = default;
};

struct JudgeVerdict {
  DimensionScores scores;
  std::string justification;
};

std::string evaluation_prompt();

// One judge call; a reply with missing or out-of-range scores is re-asked
// once, then JudgeFormatError.
JudgeVerdict judge_dimensions(llm::Gateway& gateway, const std::string& report_markdown, const std::string& question,
                              const std::string& judge_role);

// Throws NoJudges for an empty map.
DimensionScores ensemble_mean(const std::map<std::string, DimensionScores>& per_judge);

double overall_average(double correctness, double faithfulness, const DimensionScores& dims);

struct ReportStats {
  std::size_t words = 0;
  std::size_t charts = 0;
  std::size_t refs = 0;
  std::size_t cites = 0;
  std::optional<std::size_t> pages;
};

ReportStats report_statistics(std::string_view report_markdown);

struct CapabilityTags {
  int level = 1;
  std::vector<int> capabilities;
};

struct CapabilityProfile {
  std::size_t questions = 0;
  std::array<double, 10> frequency{};  // index i holds capability i + 1
  double avg_per_question = 0.0;
  std::size_t max_per_question = 0;
};

// Throws BadCapabilityId for ids outside 1..10.
std::map<int, CapabilityProfile> capability_distribution(const std::vector<CapabilityTags>& questions);

}  // namespace esg::eval
