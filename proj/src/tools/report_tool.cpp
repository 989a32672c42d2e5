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
#include <cctype>
#include <sstream>

#include "esg/common/text.hpp"
#include "esg/tools/builtin.hpp"
#include "handlers.hpp"

namespace esg::tools {

std::string link_citations(std::string_view body, const std::map<int, std::string>& uris, std::set<int>* used,
                           bool strict) {
  std::string out;
  out.reserve(body.size());
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c != '[' || (i > 0 && body[i - 1] == '!')) {
      out += c;
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < body.size() && std::isdigit(static_cast<unsigned char>(body[j]))) ++j;
    if (j == i + 1 || j >= body.size() || body[j] != ']' || j - i > 6) {
      out += c;
      ++i;
      continue;
    }
    const int n = std::stoi(std::string(body.substr(i + 1, j - i - 1)));
    const bool linked = j + 1 < body.size() && body[j + 1] == '(';
    const auto it = uris.find(n);
    if (it == uris.end()) {
      if (strict) throw Error(ErrorKind::kDanglingCitation, "inline citation [" + std::to_string(n) + "] has no entry");
      out += body.substr(i, j + 1 - i);
      i = j + 1;
      continue;
    }
    if (used) used->insert(n);
    if (linked) {
      const auto close = body.find(')', j + 1);
      const auto end = close == std::string_view::npos ? body.size() : close + 1;
      out += body.substr(i, end - i);
      i = end;
    } else {
      out += "[" + std::to_string(n) + "](" + it->second + ")";
      i = j + 1;
    }
  }
  return out;
}

ReportDraft parse_report_draft(const Json& args) {
  ReportDraft d;
  d.title = required_string(args, "title");
  const auto bad = [](const std::string& what) { return Error(ErrorKind::kArgValidation, "report draft: " + what); };
  if (!args.contains("sections") || !args["sections"].is_array()) throw bad("sections must be a list");
  for (const auto& s : args["sections"]) {
    if (!s.is_object()) throw bad("each section must be an object");
    ReportSection sec;
    sec.heading = s.value("heading", std::string());
    sec.body = s.contains("body_markdown") ? s.value("body_markdown", std::string()) : s.value("body", std::string());
    d.sections.push_back(std::move(sec));
  }
  if (args.contains("citations") && !args["citations"].is_null()) {
    if (!args["citations"].is_array()) throw bad("citations must be a list");
    for (const auto& c : args["citations"]) {
      if (!c.is_object() || !c.contains("index") || !c["index"].is_number_integer() || !c.contains("uri") ||
          !c["uri"].is_string()) {
        throw bad("each citation needs an integer index and a uri");
      }
      d.citations.push_back({c["index"].get<int>(), c["uri"].get<std::string>(), c.value("label", std::string())});
    }
  }
  if (args.contains("figures") && !args["figures"].is_null()) {
    if (!args["figures"].is_array()) throw bad("figures must be a list");
    for (const auto& f : args["figures"]) {
      ReportFigure fig;
      if (f.is_string()) {
        fig.path = f.get<std::string>();
      } else if (f.is_object() && f.contains("path") && f["path"].is_string()) {
        fig.path = f["path"].get<std::string>();
        fig.label = f.value("label", std::string());
        if (f.contains("after_section") && f["after_section"].is_string()) fig.after_section = f["after_section"].get<std::string>();
      } else {
        throw bad("each figure must be a path or {path, label}");
      }
      d.figures.push_back(std::move(fig));
    }
  }
  return d;
}

std::string render_report(const ReportDraft& draft) {
  if (draft.sections.empty()) throw Error(ErrorKind::kArgValidation, "a report needs at least one section");
  auto citations = draft.citations;
  std::sort(citations.begin(), citations.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  std::map<int, std::string> uris;
  for (std::size_t i = 0; i < citations.size(); ++i) {
    if (citations[i].index != static_cast<int>(i + 1)) {
      throw Error(ErrorKind::kArgValidation, "citation indices must be unique and contiguous from 1");
    }
    if (text::trim(citations[i].uri).empty()) {
      throw Error(ErrorKind::kArgValidation, "citation " + std::to_string(citations[i].index) + " has no uri");
    }
    uris[citations[i].index] = citations[i].uri;
  }
  std::vector<bool> placed(draft.figures.size(), false);
  auto figure_line = [&](std::size_t i) {
    const auto& f = draft.figures[i];
    const auto label = f.label.empty() ? "Figure " + std::to_string(i + 1) : f.label;
    placed[i] = true;
    return "![" + label + "](" + f.path + ")\n\n";
  };
  std::ostringstream md;
  md << "# " << draft.title << "\n\n";
  for (const auto& s : draft.sections) {
    if (!s.heading.empty()) md << "## " << s.heading << "\n\n";
    md << text::trim(link_citations(s.body, uris)) << "\n\n";
    for (std::size_t i = 0; i < draft.figures.size(); ++i) {
      if (!placed[i] && draft.figures[i].after_section == s.heading) md << figure_line(i);
    }
  }
  for (std::size_t i = 0; i < draft.figures.size(); ++i) {
    if (!placed[i]) md << figure_line(i);
  }
  md << "## References\n\n";
  for (const auto& c : citations) {
    md << "[" << c.index << "](" << c.uri << ") " << (c.label.empty() ? c.uri : c.label) << "\n\n";
  }
  return md.str();
}

namespace detail {

ToolResult run_report(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  if (const auto fmt = opt_string(call.args, "format"); fmt && text::to_lower(*fmt) != "markdown") {
    throw Error(ErrorKind::kArgValidation, "only the markdown report format is supported");
  }
  const auto markdown = render_report(parse_report_draft(call.args));
  const auto path = ctx.workdir() / "report.md";
  write_file(path, markdown);
  ToolResult r = ToolResult::success("Report saved to: report.md");
  r.artifact_paths.push_back(path);
  return r;
}

}  // namespace detail
}  // namespace esg::tools
