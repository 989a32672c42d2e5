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

#include "esg/tools/builtin.hpp"

#include <algorithm>

#include "handlers.hpp"

namespace esg::tools {

namespace {

using T = ArgType;

ArgSpec req(ArgType t) { return {t, true}; }
ArgSpec opt(ArgType t) { return {t, false}; }

}  // namespace

ToolRegistry default_registry(const ToolEnvironment& env, const std::set<std::string>& disabled) {
  const auto& canon = ToolRegistry::canonical_names();
  for (const auto& name : disabled) {
    if (std::find(canon.begin(), canon.end(), name) == canon.end()) {
      throw Error(ErrorKind::kUnknownToolName, "cannot disable unknown tool '" + name + "'");
    }
  }
  ToolRegistry r;
  auto add = [&](ToolSpec spec, ToolHandler handler) {
    const bool enabled = disabled.count(spec.name) == 0;
    r.register_tool(std::move(spec), std::move(handler), enabled);
  };
  add({"converter", "Extract the text of a file in the run directory (text and markdown built in).",
       {{"path", req(T::kPath)}}, std::nullopt},
      detail::run_converter);
  add({"deep_analyzer", "Read one or more files part by part and synthesise an answer to a task.",
       {{"task", req(T::kText)}, {"file_paths", req(T::kList)}}, env.analyzer_budget},
      detail::run_deep_analyzer);
  add({"code_interpreter", "Run Python code in a sandbox; prints and written files are returned.",
       {{"code", req(T::kText)}}, std::nullopt},
      detail::run_code_interpreter);
  add({"retriever", "Search the local ESG document index; writes a retrieval report markdown file.",
       {{"query", req(T::kText)}, {"top_k", opt(T::kInt)}, {"mode", opt(T::kText)}}, std::nullopt},
      detail::run_retriever);
  add({"deep_researcher", "Multi-step web research on a task; writes research_<call_id>.md with references.",
       {{"task", req(T::kText)},
        {"filter_year", opt(T::kInt)},
        {"title", opt(T::kText)},
        {"call_id", opt(T::kText)},
        {"image", opt(T::kPath)}},
       env.researcher_budget},
      detail::run_deep_researcher);
  add({"web_search", "One web search; returns titles, urls and snippets.",
       {{"query", req(T::kText)}, {"filter_year", opt(T::kInt)}, {"max_results", opt(T::kInt)}}, std::nullopt},
      detail::run_web_search);
  add({"plotter", "Draw a chart from tabular data {columns: [{name, values}]} and save it as an image.",
       {{"data", req(T::kObject)}, {"intent", req(T::kText)}}, std::nullopt},
      detail::run_plotter);
  add({"report", "Write the final markdown report: title, sections, numbered citations and figures.",
       {{"title", req(T::kText)},
        {"sections", req(T::kList)},
        {"citations", opt(T::kList)},
        {"figures", opt(T::kList)},
        {"format", opt(T::kText)}},
       std::nullopt},
      detail::run_report);
  add({"reformulator", "Turn gathered information into the bare final answer to a closed question.",
       {{"task", req(T::kText)}, {"data", req(T::kList)}}, std::nullopt},
      detail::run_reformulator);
  add({"todo", "Track plan steps: action add (step_id, task, priority, after_step_id) or complete (step_id, status).",
       {{"action", req(T::kText)},
        {"step_id", req(T::kText)},
        {"task", opt(T::kText)},
        {"status", opt(T::kText)},
        {"result", opt(T::kText)},
        {"priority", opt(T::kText)},
        {"category", opt(T::kText)},
        {"after_step_id", opt(T::kText)}},
       std::nullopt},
      detail::run_todo);
  add({"bash", "Run a shell command inside the run directory.", {{"command", req(T::kText)}}, std::nullopt},
      detail::run_bash);
  add({"done", "Finish the task with the final answer.", {{"result", req(T::kText)}, {"reasoning", opt(T::kText)}},
       std::nullopt},
      detail::run_done);
  return r;
}

}  // namespace esg::tools
