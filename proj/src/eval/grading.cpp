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

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "esg/common/error.hpp"
#include "esg/common/text.hpp"
#include "esg/eval/evaluator.hpp"

namespace esg::eval {

std::string_view to_string(QuestionType type) {
  switch (type) {
    case QuestionType::kTf: return "tf";
    case QuestionType::kMc: return "mc";
    case QuestionType::kFib: return "fib";
    case QuestionType::kOpen: return "open";
  }
  return "open";
}

QuestionType question_type_from_string(std::string_view s) {
  const auto t = text::to_lower(text::trim(s));
  if (t == "tf") return QuestionType::kTf;
  if (t == "mc") return QuestionType::kMc;
  if (t == "fib") return QuestionType::kFib;
  if (t == "open") return QuestionType::kOpen;
  throw Error(ErrorKind::kSchemaError, "unknown question type '" + std::string(s) + "'");
}

namespace {

bool punct(unsigned char c) { return std::ispunct(c) || std::isspace(c); }

std::string strip_folded(std::string_view raw) {
  auto s = text::to_lower(raw);
  std::size_t b = 0, e = s.size();
  while (b < e && punct(static_cast<unsigned char>(s[b]))) {
    // A sign or decimal point in front of a digit belongs to the number.
    const bool numeric_lead = (s[b] == '-' || s[b] == '+' || s[b] == '.') && b + 1 < e &&
                              std::isdigit(static_cast<unsigned char>(s[b + 1]));
    if (numeric_lead) break;
    ++b;
  }
  while (e > b && punct(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::optional<double> as_number(const std::string& s) {
  std::string compact;
  for (char c : s) {
    if (c != ',' && c != '_') compact += c;
  }
  if (compact.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(compact.c_str(), &end);
  if (end != compact.c_str() + compact.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

std::string normalize_answer(std::string_view raw, QuestionType type) {
  const auto s = strip_folded(raw);
  switch (type) {
    case QuestionType::kTf:
      if (s == "true" || s == "t" || s == "yes") return "true";
      if (s == "false" || s == "f" || s == "no") return "false";
      return s;
    case QuestionType::kMc:
      if (!s.empty() && s[0] >= 'a' && s[0] <= 'z' &&
          (s.size() == 1 || !std::isalnum(static_cast<unsigned char>(s[1])))) {
        return s.substr(0, 1);
      }
      throw Error(ErrorKind::kUnnormalizable, "no option letter in '" + std::string(raw) + "'");
    case QuestionType::kFib:
    case QuestionType::kOpen:
      return s;
  }
  return s;
}

bool grade_closed(std::string_view predicted, std::string_view gold, QuestionType type) {
  if (text::trim(gold).empty()) throw Error(ErrorKind::kArgValidation, "gold answer is empty");
  std::string p, g;
  try {
    p = normalize_answer(predicted, type);
    g = normalize_answer(gold, type);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kUnnormalizable) return false;
    throw;
  }
  if (type == QuestionType::kFib) {
    const auto a = as_number(p);
    const auto b = as_number(g);
    if (a && b) {
      const double scale = std::max(std::fabs(*a), std::fabs(*b));
      return std::fabs(*a - *b) <= 1e-9 * scale;
    }
  }
  return p == g;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = value * scale;
  const double guard = 1e-9 * std::max(1.0, std::fabs(scaled));
  const double r = value >= 0 ? std::floor(scaled + 0.5 + guard) : -std::floor(-scaled + 0.5 + guard);
  return r / scale;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_half_up(value, decimals));
  std::string out = buf;
  if (out.starts_with("-") && std::strtod(buf, nullptr) == 0.0) out.erase(0, 1);
  return out;
}

double percent_half_up(std::size_t correct, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::kArgValidation, "percentage of an empty set");
  const auto hundredths = (20000ULL * correct + n) / (2ULL * n);
  return static_cast<double>(hundredths) / 100.0;
}

AccuracySummary accuracy_summary(const std::vector<GradedAnswer>& graded) {
  std::map<int, LevelAccuracy> by_level;
  LevelAccuracy total;
  for (const auto& g : graded) {
    if (g.level != 1 && g.level != 2) continue;
    auto& l = by_level[g.level];
    l.level = g.level;
    ++l.n;
    ++total.n;
    if (g.correct) {
      ++l.correct;
      ++total.correct;
    }
  }
  AccuracySummary out;
  for (auto& [level, l] : by_level) {
    l.acc_pct = percent_half_up(l.correct, l.n);
    out.levels.push_back(l);
  }
  if (total.n > 0) {
    total.acc_pct = percent_half_up(total.correct, total.n);
    out.total = total;
  }
  return out;
}

std::map<int, CapabilityProfile> capability_distribution(const std::vector<CapabilityTags>& questions) {
  std::map<int, std::array<std::size_t, 10>> counts;
  std::map<int, CapabilityProfile> out;
  std::map<int, std::size_t> tag_total;
  for (const auto& q : questions) {
    const std::set<int> caps(q.capabilities.begin(), q.capabilities.end());
    for (int c : caps) {
      if (c < 1 || c > 10) throw Error(ErrorKind::kBadCapabilityId, "capability id " + std::to_string(c) + " is outside 1..10");
    }
    auto& profile = out[q.level];
    auto& row = counts[q.level];
    ++profile.questions;
    for (int c : caps) ++row[static_cast<std::size_t>(c - 1)];
    tag_total[q.level] += caps.size();
    profile.max_per_question = std::max(profile.max_per_question, caps.size());
  }
  for (auto& [level, profile] : out) {
    const double n = static_cast<double>(profile.questions);
    for (std::size_t i = 0; i < 10; ++i) profile.frequency[i] = static_cast<double>(counts[level][i]) / n;
    profile.avg_per_question = static_cast<double>(tag_total[level]) / n;
  }
  return out;
}

}  // namespace esg::eval
