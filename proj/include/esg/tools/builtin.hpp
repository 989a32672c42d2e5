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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "esg/tools/tool.hpp"

namespace esg::tools {

// The 12 canonical tools; names in `disabled` are registered but unreachable.
// Throws UnknownToolName for a disabled name outside the canonical set.
ToolRegistry default_registry(const ToolEnvironment& env, const std::set<std::string>& disabled = {});

struct ReportSection {
  std::string heading;
  std::string body;
};

struct ReportCitation {
  int index = 0;
  std::string uri;
  std::string label;
};

struct ReportFigure {
  std::string path;
  std::string label;
  std::optional<std::string> after_section;  // heading; figures go last when absent
};

struct ReportDraft {
  std::string title;
  std::vector<ReportSection> sections;
  std::vector<ReportCitation> citations;
  std::vector<ReportFigure> figures;
};

// Reads a draft from report tool args. Figures may be plain path strings.
ReportDraft parse_report_draft(const Json& args);

// Renders the final markdown. Throws ArgValidation for empty sections or
// non-contiguous citation indices and DanglingCitation for inline indices
// with no entry.
std::string render_report(const ReportDraft& draft);

// Rewrites bare [n] markers as [n](uri). Already linked [n](...) markers are
// kept. An n without a uri throws DanglingCitation when `strict`, and is
// left untouched otherwise. `used` collects the indices seen.
std::string link_citations(std::string_view body, const std::map<int, std::string>& uris,
                           std::set<int>* used = nullptr, bool strict = true);

// Strips fences, quotes and "Answer:" style labels from a model answer.
std::string clean_answer(std::string_view raw);

// Throws JailViolation when the command names a path outside `workdir`:
// absolute paths (other than /dev/null), home-relative paths, or any path
// with a ".." component.
void check_command_jail(std::string_view command, const std::filesystem::path& workdir);

// Restricts a caller-provided id to [A-Za-z0-9_-].
std::string sanitize_id(std::string_view id);

}  // namespace esg::tools
