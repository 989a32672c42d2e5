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
#include <functional>

#include "esg/common/error.hpp"
#include "esg/common/text.hpp"
#include "esg/eval/evaluator.hpp"

namespace esg::eval {

namespace {

struct Split {
  std::vector<std::string> body;  // lines outside fenced code, before the references heading
  std::vector<std::string> refs;
  bool has_references = false;
};

bool is_fence(const std::string& line) { return text::trim(line).starts_with("```"); }

int heading_level(const std::string& line) {
  const auto t = text::trim(line);
  int n = 0;
  while (n < static_cast<int>(t.size()) && t[static_cast<std::size_t>(n)] == '#') ++n;
  if (n == 0 || n >= static_cast<int>(t.size()) || t[static_cast<std::size_t>(n)] != ' ') return 0;
  return n;
}

bool is_references_heading(const std::string& line) {
  const int level = heading_level(line);
  if (level == 0 || level > 2) return false;
  return text::to_lower(text::trim(text::trim(line).substr(static_cast<std::size_t>(level)))) == "references";
}

Split split_report(std::string_view md) {
  Split out;
  bool in_fence = false;
  bool in_refs = false;
  for (const auto& line : text::split_lines(md)) {
    if (is_fence(line)) {
      in_fence = !in_fence;
      continue;
    }
    if (in_fence) continue;
    if (!in_refs && is_references_heading(line)) {
      in_refs = true;
      out.has_references = true;
      continue;
    }
    (in_refs ? out.refs : out.body).push_back(line);
  }
  return out;
}

bool is_image_line(const std::string& line) {
  const auto t = text::trim(line);
  return t.starts_with("![") && t.find("](") != std::string::npos;
}

// Calls `fn(index, uri, begin, end)` for every `[n](uri)` not preceded by '!'.
void scan_citations(std::string_view s, const std::function<void(int, std::string, std::size_t, std::size_t)>& fn) {
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '[' || (i > 0 && s[i - 1] == '!')) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i + 1 || j - i > 6 || j + 1 >= s.size() || s[j] != ']' || s[j + 1] != '(') {
      ++i;
      continue;
    }
    const auto close = s.find(')', j + 2);
    if (close == std::string_view::npos) {
      ++i;
      continue;
    }
    fn(std::stoi(std::string(s.substr(i + 1, j - i - 1))), std::string(s.substr(j + 2, close - j - 2)), i, close + 1);
    i = close + 1;
  }
}

bool is_list_item(const std::string& t) {
  if (t.starts_with("- ") || t.starts_with("* ") || t.starts_with("+ ")) return true;
  std::size_t d = 0;
  while (d < t.size() && std::isdigit(static_cast<unsigned char>(t[d]))) ++d;
  return d > 0 && d + 1 < t.size() && (t[d] == '.' || t[d] == ')') && t[d + 1] == ' ';
}

// Paragraph, list item and heading blocks of the body.
std::vector<std::string> body_blocks(const std::vector<std::string>& lines) {
  std::vector<std::string> blocks;
  std::string current;
  auto flush = [&] {
    if (!text::trim(current).empty()) blocks.push_back(text::trim(current));
    current.clear();
  };
  for (const auto& line : lines) {
    const auto t = text::trim(line);
    if (t.empty() || is_image_line(t)) {
      flush();
      continue;
    }
    if (heading_level(t) > 0 || is_list_item(t)) {
      flush();
      current = t;
      if (heading_level(t) > 0) flush();
      continue;
    }
    current += current.empty() ? t : " " + t;
  }
  flush();
  return blocks;
}

std::vector<std::string> sentences(const std::string& block) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < block.size(); ++i) {
    const char c = block[i];
    if ((c == '.' || c == '?' || c == '!') && (i + 1 == block.size() || std::isspace(static_cast<unsigned char>(block[i + 1])))) {
      out.push_back(text::trim(block.substr(start, i + 1 - start)));
      start = i + 1;
    }
  }
  if (start < block.size() && !text::trim(block.substr(start)).empty()) out.push_back(text::trim(block.substr(start)));
  return out;
}

std::string strip_citations(const std::string& sentence) {
  std::string out;
  std::size_t last = 0;
  scan_citations(sentence, [&](int, const std::string&, std::size_t b, std::size_t e) {
    out += sentence.substr(last, b - last);
    last = e;
  });
  out += sentence.substr(last);
  std::string collapsed;
  for (const auto& w : text::split_whitespace(out)) collapsed += collapsed.empty() ? w : " " + w;
  // "... targets ." reads better without the gap the markup left.
  for (const char* p : {" .", " ,", " ;", " ?", " !"}) {
    for (auto pos = collapsed.find(p); pos != std::string::npos; pos = collapsed.find(p, pos)) collapsed.erase(pos, 1);
  }
  return collapsed;
}

}  // namespace

std::vector<CitationPair> extract_citations(std::string_view report_markdown) {
  const auto split = split_report(report_markdown);
  if (!split.has_references) throw Error(ErrorKind::kMalformedReport, "the report has no \"## References\" section");
  std::vector<CitationPair> pairs;
  for (const auto& block : body_blocks(split.body)) {
    for (const auto& s : sentences(block)) {
      std::string claim;
      scan_citations(s, [&](int n, const std::string& uri, std::size_t, std::size_t) {
        if (claim.empty()) claim = strip_citations(s);
        pairs.push_back({claim, n, uri});
      });
    }
  }
  return pairs;
}

std::vector<Reference> parse_references(std::string_view report_markdown) {
  std::vector<Reference> out;
  for (const auto& line : split_report(report_markdown).refs) {
    auto t = text::trim(line);
    if (t.starts_with("- ") || t.starts_with("* ")) t = text::trim(t.substr(2));
    bool found = false;
    scan_citations(t, [&](int n, const std::string& uri, std::size_t b, std::size_t e) {
      if (found || b != 0) return;
      found = true;
      out.push_back({n, uri, text::trim(t.substr(e))});
    });
  }
  return out;
}

ReportStats report_statistics(std::string_view report_markdown) {
  const auto split = split_report(report_markdown);
  ReportStats st;
  for (const auto& line : split.body) {
    if (is_image_line(line)) {
      ++st.charts;
      continue;
    }
    st.words += text::split_whitespace(line).size();
    scan_citations(line, [&](int, const std::string&, std::size_t, std::size_t) { ++st.cites; });
  }
  for (const auto& line : split.refs) {
    const auto t = text::trim(line);
    if (!t.empty() && heading_level(t) == 0) ++st.refs;
  }
  return st;
}

}  // namespace esg::eval
