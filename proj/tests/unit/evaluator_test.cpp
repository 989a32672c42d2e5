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

#include <random>

#include <gtest/gtest.h>

#include "esg/eval/evaluator.hpp"
#include "test_support.hpp"

namespace esg::eval {
namespace {

using esg::testing::kind_of;
using esg::testing::say;

DimensionScores dims(std::array<double, 6> v) { return DimensionScores{v}; }

TEST(NormalizeTest, Examples) {
  EXPECT_EQ(normalize_answer("C.", QuestionType::kMc), "c");
  EXPECT_EQ(normalize_answer("C) Scope 3", QuestionType::kMc), "c");
  EXPECT_EQ(normalize_answer("Yes", QuestionType::kTf), "true");
  EXPECT_EQ(normalize_answer(" F ", QuestionType::kTf), "false");
  EXPECT_EQ(normalize_answer("250 tCO2e", QuestionType::kFib), "250 tco2e");
  EXPECT_EQ(normalize_answer("-0.5.", QuestionType::kFib), "-0.5");
  EXPECT_EQ(kind_of([] { normalize_answer("Scope", QuestionType::kMc); }), ErrorKind::kUnnormalizable);
  EXPECT_EQ(kind_of([] { normalize_answer("", QuestionType::kMc); }), ErrorKind::kUnnormalizable);
}

TEST(GradeTest, Examples) {
  EXPECT_TRUE(grade_closed("250", "250", QuestionType::kFib));
  EXPECT_TRUE(grade_closed("250.0000000001", "250", QuestionType::kFib));
  EXPECT_FALSE(grade_closed("250.001", "250", QuestionType::kFib));
  EXPECT_TRUE(grade_closed("50,000", "50000", QuestionType::kFib));
  EXPECT_TRUE(grade_closed("kunming-montreal global biodiversity framework",
                           "Kunming-Montreal Global Biodiversity Framework", QuestionType::kFib));
  EXPECT_TRUE(grade_closed("d", "D", QuestionType::kMc));
  EXPECT_FALSE(grade_closed("no letter here", "D", QuestionType::kMc));
  EXPECT_TRUE(grade_closed("yes", "True", QuestionType::kTf));
  EXPECT_EQ(kind_of([] { grade_closed("a", " ", QuestionType::kFib); }), ErrorKind::kArgValidation);
}

TEST(GradeTest, FibSymmetry) {
  std::mt19937 rng(7);
  const std::vector<std::string> pool = {"250", "250.0", "250.0000000001", "2.5e2", "251", "-3", "-3.0",
                                         "Kunming", "kunming.", "0", "0.0", "1,000", "1000", "abc"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int i = 0; i < 500; ++i) {
    const auto& a = pool[pick(rng)];
    const auto& b = pool[pick(rng)];
    EXPECT_EQ(grade_closed(a, b, QuestionType::kFib), grade_closed(b, a, QuestionType::kFib)) << a << " vs " << b;
  }
}

TEST(RoundingTest, HalfUpAtPresentation) {
  EXPECT_EQ(format_fixed(7.1415, 3), "7.142");
  EXPECT_EQ(format_fixed(7.82475, 3), "7.825");
  EXPECT_EQ(format_fixed(0.0, 3), "0.000");
  EXPECT_EQ(format_fixed(2.5, 0), "3");
  EXPECT_DOUBLE_EQ(percent_half_up(119, 132), 90.15);
  EXPECT_DOUBLE_EQ(percent_half_up(1, 8), 12.5);
  EXPECT_DOUBLE_EQ(percent_half_up(1, 3), 33.33);
  EXPECT_DOUBLE_EQ(percent_half_up(2, 3), 66.67);
}

GradedAnswer graded(int level, bool correct) { return {"q", "p", "g", correct, level}; }

std::vector<GradedAnswer> counts(std::size_t c1, std::size_t n1, std::size_t c2, std::size_t n2) {
  std::vector<GradedAnswer> out;
  for (std::size_t i = 0; i < n1; ++i) out.push_back(graded(1, i < c1));
  for (std::size_t i = 0; i < n2; ++i) out.push_back(graded(2, i < c2));
  return out;
}

TEST(AccuracyTest, ReferenceRows) {
  const auto full = accuracy_summary(counts(119, 132, 88, 114));
  ASSERT_EQ(full.levels.size(), 2u);
  EXPECT_EQ(format_fixed(full.levels[0].acc_pct, 2), "90.15");
  EXPECT_EQ(format_fixed(full.levels[1].acc_pct, 2), "77.19");
  EXPECT_EQ(full.total->correct, 207u);
  EXPECT_EQ(full.total->n, 246u);
  EXPECT_EQ(format_fixed(full.total->acc_pct, 2), "84.15");

  const auto ablated = accuracy_summary(counts(117, 132, 75, 114));
  EXPECT_EQ(format_fixed(ablated.levels[0].acc_pct, 2), "88.64");
  EXPECT_EQ(format_fixed(ablated.levels[1].acc_pct, 2), "65.79");
  EXPECT_EQ(format_fixed(ablated.total->acc_pct, 2), "78.05");
}

TEST(AccuracyTest, EmptyLevelOmittedAndBruteForce) {
  const auto only1 = accuracy_summary(counts(3, 4, 0, 0));
  ASSERT_EQ(only1.levels.size(), 1u);
  EXPECT_EQ(only1.levels[0].level, 1);
  EXPECT_TRUE(accuracy_summary({}).levels.empty());
  EXPECT_FALSE(accuracy_summary({}).total);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<GradedAnswer> g;
    const auto n = std::uniform_int_distribution<int>(1, 60)(rng);
    for (int i = 0; i < n; ++i) g.push_back(graded(1 + static_cast<int>(rng() % 2), rng() % 3 != 0));
    std::map<int, std::pair<int, int>> brute;
    for (const auto& a : g) {
      brute[a.level].first += a.correct;
      brute[a.level].second += 1;
    }
    const auto s = accuracy_summary(g);
    ASSERT_EQ(s.levels.size(), brute.size());
    for (const auto& l : s.levels) {
      EXPECT_EQ(static_cast<int>(l.correct), brute[l.level].first);
      EXPECT_EQ(static_cast<int>(l.n), brute[l.level].second);
      // Reference: round(100 * c / n, 2) half-up via long double.
      const long double ref = std::floor(10000.0L * l.correct / l.n + 0.5L + 1e-12L) / 100.0L;
      EXPECT_NEAR(l.acc_pct, static_cast<double>(ref), 1e-9);
    }
  }
}

TEST(OverallAverageTest, ReferenceRows) {
  // (9.30 + 8.05 + 8.125 + 7.958 + 7.750 + 8.167 + 8.292 + 7.125) / 8 = 64.767 / 8
  const double esg = overall_average(0.930, 0.805, dims({8.125, 7.958, 7.750, 8.167, 8.292, 7.125}));
  EXPECT_NEAR(esg, 64.767 / 8, 1e-12);
  EXPECT_LE(std::fabs(esg - 8.096), 0.0005);
  EXPECT_EQ(format_fixed(esg, 3), "8.096");
  // 57.132 / 8 = 7.1415 sits on the half-way point of the printed 7.142.
  const double gpt = overall_average(0.894, 0.765, dims({6.875, 7.042, 6.000, 7.542, 7.250, 5.833}));
  EXPECT_NEAR(gpt, 57.132 / 8, 1e-12);
  EXPECT_LE(std::fabs(gpt - 7.142), 0.0005 + 1e-12);
  EXPECT_EQ(format_fixed(gpt, 3), "7.142");
  EXPECT_EQ(overall_average(0, 0, dims({0, 0, 0, 0, 0, 0})), 0.0);
}

TEST(EnsembleTest, ReferenceColumnsAndIdentity) {
  std::map<std::string, DimensionScores> gpt_dr = {{"gpt-5.2", dims({5.333, 4.833, 4.833, 6.167, 5.833, 4.500})},
                                                   {"gemini-3-flash", dims({8.667, 8.833, 7.500, 9.000, 9.000, 8.167})},
                                                   {"deepseek-r1", dims({6.500, 7.833, 5.833, 7.667, 7.000, 5.833})},
                                                   {"sonnet-4.5", dims({7.000, 6.667, 5.833, 7.333, 7.167, 4.833})}};
  const auto m = ensemble_mean(gpt_dr);
  EXPECT_EQ(format_fixed(m.richness(), 3), "6.875");
  EXPECT_EQ(format_fixed(m.completeness(), 3), "7.042");
  EXPECT_EQ(format_fixed(m.depth(), 3), "6.000");
  EXPECT_EQ(format_fixed(m.coherence(), 3), "7.542");
  EXPECT_EQ(format_fixed(m.expressiveness(), 3), "5.833");

  std::map<std::string, DimensionScores> esg_depth;
  const std::array<double, 4> depth = {6.299, 8.667, 7.833, 8.500};
  for (std::size_t i = 0; i < depth.size(); ++i) esg_depth["j" + std::to_string(i)] = dims({0, 0, depth[i], 0, 0, 0});
  EXPECT_NEAR(ensemble_mean(esg_depth).depth(), 31.299 / 4, 1e-12);
  EXPECT_EQ(format_fixed(ensemble_mean(esg_depth).depth(), 3), "7.825");

  const auto one = dims({1, 2, 3, 4, 5, 6});
  EXPECT_EQ(ensemble_mean({{"a", one}}), one);
  EXPECT_EQ(ensemble_mean({{"a", one}, {"b", one}, {"c", one}}), one);
  EXPECT_EQ(kind_of([] { ensemble_mean({}); }), ErrorKind::kNoJudges);
}

const char* kConstructed =
    "# Apple Environmental Review\n\n"
    "## Emissions\n\n"
    "Scope 1 fell 12% [1](doc://a#0). Scope 2 fell 30% [2](doc://b#1). Both fell [1](doc://a#0)[3](doc://c#0).\n\n"
    "![Scope trend](chart.png)\n\n"
    "```python\nprint('[9](doc://ignored)')\n```\n\n"
    "## Outlook\n\n"
    "- Apple targets carbon neutrality by 2030 [3](doc://c#0).\n\n"
    "![Mix](mix.svg)\n\n"
    "## References\n\n"
    "[1](doc://a#0) Env report 2022\n\n[2](doc://b#1) Env report 2023\n\n[3](doc://c#0) CDP response\n";

TEST(ReportStatsTest, ConstructedReport) {
  const auto st = report_statistics(kConstructed);
  EXPECT_EQ(st.charts, 2u);
  EXPECT_EQ(st.refs, 3u);
  EXPECT_EQ(st.cites, 5u);
  EXPECT_FALSE(st.pages);
  EXPECT_GT(st.words, 20u);

  const auto empty = report_statistics("");
  EXPECT_EQ(empty.words + empty.charts + empty.refs + empty.cites, 0u);

  const auto reuse = report_statistics(
      "Claim [1](u). Again [1](u). Third [1](u). Fourth [1](u). Fifth [1](u).\n\n## References\n\n[1](u) Only\n");
  EXPECT_EQ(reuse.refs, 1u);
  EXPECT_EQ(reuse.cites, 5u);

  const auto no_refs = report_statistics("A [1](u) and [2](v).");
  EXPECT_EQ(no_refs.refs, 0u);
  EXPECT_EQ(no_refs.cites, 2u);
}

TEST(ReportStatsTest, CitesAreAdditiveOverBodies) {
  const std::string a = "One [1](u). Two [2](v) [1](u).\n";
  const std::string b = "- item [3](w)\n\nThree [2](v).\n";
  const std::string refs = "\n## References\n\n[1](u) U\n\n[2](v) V\n\n[3](w) W\n";
  const auto sa = report_statistics(a + refs).cites;
  const auto sb = report_statistics(b + refs).cites;
  EXPECT_EQ(report_statistics(a + "\n" + b + refs).cites, sa + sb);
}

TEST(ExtractCitationsTest, PairsAndErrors) {
  const auto pairs = extract_citations(kConstructed);
  ASSERT_EQ(pairs.size(), 5u);
  EXPECT_EQ(pairs[0].claim, "Scope 1 fell 12%.");
  EXPECT_EQ(pairs[0].uri, "doc://a#0");
  EXPECT_EQ(pairs[2].claim, pairs[3].claim);  // two citations sharing one sentence
  EXPECT_EQ(pairs[2].index, 1);
  EXPECT_EQ(pairs[3].index, 3);
  EXPECT_EQ(pairs[4].claim, "- Apple targets carbon neutrality by 2030.");
  EXPECT_EQ(kind_of([] { extract_citations("No refs [1](u)."); }), ErrorKind::kMalformedReport);

  const auto refs = parse_references(kConstructed);
  ASSERT_EQ(refs.size(), 3u);
  EXPECT_EQ(refs[1].uri, "doc://b#1");
  EXPECT_EQ(refs[1].label, "Env report 2023");
}

std::map<int, EvidenceDoc> store() { return {{1, {"doc://a#0", "Scope 1 emissions fell 12% in 2023."}}}; }

TEST(JudgeCitationTest, ExistenceSupportCausality) {
  auto g = esg::testing::replay_gateway({say("{\"verdict\": \"supported\"}"), say("{\"verdict\": \"supported\"}"),
                                         say("unsupported"), say("supported")},
                                        {"citation_judge"});
  const CitationPair pair{"Scope 1 fell 12%.", 1, "doc://a#0"};
  const std::set<std::string> a = {"doc://a#0"};
  const auto all = judge_citation(*g, pair, store(), a, a);
  EXPECT_TRUE(all.correct);
  EXPECT_TRUE(all.faithful);
  EXPECT_TRUE(all.causality_approximated);

  const auto absent = judge_citation(*g, pair, store(), {}, {});
  EXPECT_TRUE(absent.correct);
  EXPECT_FALSE(absent.faithful);

  const auto unsupported = judge_citation(*g, pair, store(), a, a);
  EXPECT_FALSE(unsupported.correct);
  EXPECT_FALSE(unsupported.faithful);

  const auto late = judge_citation(*g, pair, store(), a, {});  // retrieved only after the report
  EXPECT_TRUE(late.correct);
  EXPECT_FALSE(late.faithful);

  const auto dangling = judge_citation(*g, {"x", 9, "doc://z"}, store(), a, a);
  EXPECT_FALSE(dangling.correct);
  EXPECT_TRUE(dangling.evidence.text.empty());
  EXPECT_EQ(g->call_count("citation_judge"), 4u);
}

CitationJudgment judgment(bool correct, bool faithful) {
  CitationJudgment j;
  j.correct = correct;
  j.faithful = faithful;
  return j;
}

TEST(CitationScoresTest, ExamplesAndMonotonePenalty) {
  std::vector<CitationJudgment> five = {judgment(true, true), judgment(true, true), judgment(true, false),
                                        judgment(false, false), judgment(false, false)};
  const auto s = citation_scores(five);
  EXPECT_EQ(s.c, 5u);
  EXPECT_DOUBLE_EQ(s.correctness, 0.6);
  EXPECT_DOUBLE_EQ(s.faithfulness, 0.4);
  EXPECT_DOUBLE_EQ(citation_scores({judgment(true, true)}).faithfulness, 1.0);
  EXPECT_EQ(kind_of([] { citation_scores({}); }), ErrorKind::kNoCitations);
  // A faithful flag on an incorrect judgment never counts.
  EXPECT_EQ(citation_scores({judgment(false, true)}).c_faith, 0u);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<CitationJudgment> js(1 + rng() % 40);
    for (auto& j : js) j = judgment(rng() % 2, rng() % 2);
    const auto r = citation_scores(js);
    EXPECT_LE(r.faithfulness, r.correctness);
    EXPECT_LE(r.c_faith, r.c_cor);
  }
}

TEST(JudgeDimensionsTest, ParsesReasksAndFails) {
  auto g = esg::testing::replay_gateway(
      {say("```json\n{\"richness\": 5.333, \"completeness\": 4.833, \"depth\": 4.833, \"coherence\": 6.167, "
           "\"professionalism\": 5.833, \"expressiveness\": 4.5, \"justification\": \"Dense but shallow.\"}\n```"),
       say("{\"rich\": 11, \"comp\": 5, \"depth\": 5, \"coh\": 5, \"prof\": 5, \"expr\": 5}"),
       say("{\"richness\": 7, \"completeness\": 5, \"depth\": 5, \"coherence\": 5, \"professionalism\": 5, "
           "\"expressiveness\": \"5\"}"),
       say("{\"richness\": 11}"), say("scores: high")},
      {"judge:0"});
  const auto v = judge_dimensions(*g, "# R", "task", "judge:0");
  EXPECT_EQ(v.scores, dims({5.333, 4.833, 4.833, 6.167, 5.833, 4.5}));
  EXPECT_EQ(v.justification, "Dense but shallow.");
  const auto reasked = judge_dimensions(*g, "# R", "task", "judge:0");
  EXPECT_EQ(reasked.scores.richness(), 7.0);
  EXPECT_EQ(g->call_count("judge:0"), 3u);
  EXPECT_EQ(kind_of([&] { judge_dimensions(*g, "# R", "task", "judge:0"); }), ErrorKind::kJudgeFormatError);
}

TEST(CapabilityTest, DistributionExamples) {
  const auto d = capability_distribution({{1, {1}}, {1, {1, 3}}});
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d.at(1).frequency[0], 1.0);
  EXPECT_DOUBLE_EQ(d.at(1).frequency[2], 0.5);
  EXPECT_DOUBLE_EQ(d.at(1).frequency[1], 0.0);
  EXPECT_DOUBLE_EQ(d.at(1).avg_per_question, 1.5);
  EXPECT_EQ(d.at(1).max_per_question, 2u);
  EXPECT_TRUE(capability_distribution({}).empty());
  EXPECT_EQ(kind_of([] { capability_distribution({{1, {11}}}); }), ErrorKind::kBadCapabilityId);
}

}  // namespace
}  // namespace esg::eval
