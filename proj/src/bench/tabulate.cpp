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

#include <map>
#include <sstream>

#include "esg/bench/harness.hpp"
#include "esg/common/error.hpp"

namespace esg::bench {

namespace {

void recheck(const std::optional<eval::LevelAccuracy>& l) {
  if (!l) return;
  if (l->correct > l->n || l->n == 0 || eval::percent_half_up(l->correct, l->n) != l->acc_pct) {
    throw Error(ErrorKind::kInconsistentCounts, "accuracy does not match its counts");
  }
}

std::string pct(const std::optional<eval::LevelAccuracy>& l) { return l ? eval::format_fixed(l->acc_pct, 2) : "-"; }
std::string corr(const std::optional<eval::LevelAccuracy>& l) { return l ? std::to_string(l->correct) : "-"; }

bool has_data(const ResultsRow& r) { return r.level1 || r.level2 || r.total; }

}  // namespace

ResultsRow tabulate(const std::string& label, const std::vector<AnswerRecord>& answers,
                    const std::vector<eval::GradedAnswer>& graded) {
  std::map<std::string, const eval::GradedAnswer*> by_id;
  for (const auto& g : graded) {
    if (!by_id.emplace(g.question_id, &g).second) {
      throw Error(ErrorKind::kInconsistentCounts, "question '" + g.question_id + "' is graded twice");
    }
  }
  std::vector<eval::GradedAnswer> closed;
  for (const auto& a : answers) {
    if (a.level > 2) continue;
    const auto it = by_id.find(a.question_id);
    if (it == by_id.end()) throw Error(ErrorKind::kInconsistentCounts, "question '" + a.question_id + "' has no grade");
    if (it->second->level != a.level) throw Error(ErrorKind::kInconsistentCounts, "level mismatch for '" + a.question_id + "'");
    closed.push_back(*it->second);
    by_id.erase(it);
  }
  for (const auto& [id, g] : by_id) {
    if (g->level <= 2) throw Error(ErrorKind::kInconsistentCounts, "grade for unknown question '" + id + "'");
  }

  const auto summary = eval::accuracy_summary(closed);
  ResultsRow row;
  row.label = label;
  for (const auto& l : summary.levels) (l.level == 1 ? row.level1 : row.level2) = l;
  row.total = summary.total;
  return row;
}

std::string results_markdown(const std::vector<ResultsRow>& rows) {
  std::ostringstream s;
  s << "| Models / Agents | L1 # Corr | L1 Acc (%) | L2 # Corr | L2 Acc (%) | Total Acc (%) |\n";
  s << "|---|---:|---:|---:|---:|---:|\n";
  for (const auto& r : rows) {
    if (!has_data(r)) continue;
    recheck(r.level1);
    recheck(r.level2);
    recheck(r.total);
    s << "| " << r.label << " | " << corr(r.level1) << " | " << pct(r.level1) << " | " << corr(r.level2) << " | "
      << pct(r.level2) << " | " << pct(r.total) << " |\n";
  }
  return s.str();
}

std::string results_csv(const std::vector<ResultsRow>& rows) {
  std::ostringstream s;
  s << "label,l1_correct,l1_n,l1_acc,l2_correct,l2_n,l2_acc,total_correct,total_n,total_acc\n";
  auto cells = [](const std::optional<eval::LevelAccuracy>& l) {
    if (!l) return std::string(",,");
    return std::to_string(l->correct) + "," + std::to_string(l->n) + "," + eval::format_fixed(l->acc_pct, 2);
  };
  for (const auto& r : rows) {
    if (!has_data(r)) continue;
    recheck(r.level1);
    recheck(r.level2);
    recheck(r.total);
    s << r.label << "," << cells(r.level1) << "," << cells(r.level2) << "," << cells(r.total) << "\n";
  }
  return s.str();
}

std::string summary_csv(const ResultsRow& row) {
  std::ostringstream s;
  s << "level,n,correct,acc_pct\n";
  auto line = [&](const char* name, const std::optional<eval::LevelAccuracy>& l) {
    if (!l) return;
    recheck(l);
    s << name << "," << l->n << "," << l->correct << "," << eval::format_fixed(l->acc_pct, 2) << "\n";
  };
  line("1", row.level1);
  line("2", row.level2);
  line("total", row.total);
  return s.str();
}

}  // namespace esg::bench
