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
#include <set>
#include <sstream>

#include "esg/common/fenced.hpp"
#include "esg/common/text.hpp"
#include "esg/tools/builtin.hpp"
#include "handlers.hpp"

namespace esg::tools::detail {

ExecResult execute_checked(ToolContext& ctx, const std::string& code) {
  ExecRequest req;
  req.code = code;
  req.timeout_s = ctx.env().exec_timeout_s;
  req.mem_limit_mb = ctx.env().exec_mem_limit_mb;
  req.workdir = ctx.workdir();
  auto res = ctx.sandbox().execute(req);
  if (res.timed_out) throw Error(ErrorKind::kTimeout, "code exceeded " + std::to_string(req.timeout_s) + " s");
  if (res.exit_code != 0) {
    throw Error(ErrorKind::kExecutionError, "exit code " + std::to_string(res.exit_code) + "\n" + res.stderr_text);
  }
  std::vector<fs::path> kept;
  for (const auto& a : res.artifacts) {
    if (is_within(a, ctx.workdir()) && fs::exists(a)) kept.push_back(a);
  }
  res.artifacts = std::move(kept);
  return res;
}

ToolResult run_code_interpreter(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto code = required_string(call.args, "code");
  const auto res = execute_checked(ctx, code);
  std::string summary = "Stdout:\n" + res.stdout_text;
  if (!res.artifacts.empty()) {
    summary += "\nFiles written:";
    for (const auto& a : res.artifacts) summary += " " + a.filename().string();
    summary += "\n";
  }
  ToolResult r = ToolResult::success(summary);
  r.artifact_paths = res.artifacts;
  return r;
}

namespace {

bool is_image(const fs::path& p) {
  static const std::set<std::string> exts = {".png", ".jpg", ".jpeg", ".svg", ".pdf"};
  return exts.count(text::to_lower(p.extension().string())) != 0;
}

void validate_table(const Json& data) {
  if (!data.contains("columns") || !data["columns"].is_array() || data["columns"].empty()) {
    throw Error(ErrorKind::kArgValidation, "plotter data needs a non-empty \"columns\" list");
  }
  std::optional<std::size_t> rows;
  for (const auto& c : data["columns"]) {
    if (!c.is_object() || !c.contains("name") || !c["name"].is_string() || !c.contains("values") ||
        !c["values"].is_array()) {
      throw Error(ErrorKind::kArgValidation, "each plotter column needs a name and a values list");
    }
    const auto n = c["values"].size();
    if (n == 0) throw Error(ErrorKind::kArgValidation, "plotter column '" + c["name"].get<std::string>() + "' is empty");
    if (rows && *rows != n) throw Error(ErrorKind::kArgValidation, "plotter columns have different lengths");
    rows = n;
  }
}

std::string code_of(const std::string& reply) {
  for (const auto& b : fenced_blocks(reply)) {
    if (b.label == "python" || b.label == "py" || b.label.empty()) return b.body;
  }
  return reply;
}

}  // namespace

ToolResult run_plotter(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto& data = call.args["data"];
  validate_table(data);
  const auto intent = required_string(call.args, "intent");
  std::vector<llm::ChatMessage> messages = {
      llm::ChatMessage::system("Write a self-contained Python script that draws the requested chart from the given "
                               "data and saves it as an image file (png or svg) in the current directory. Reply "
                               "with one ```python block."),
      llm::ChatMessage::user("Intent: " + intent + "\n\nData:\n" + data.dump(2))};
  std::string failure;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const auto reply = ctx.llm().complete("plotter", messages);
    messages.push_back(llm::ChatMessage::assistant(reply.content.empty() ? "(empty)" : reply.content));
    try {
      const auto res = execute_checked(ctx, code_of(reply.content));
      std::vector<fs::path> images;
      std::copy_if(res.artifacts.begin(), res.artifacts.end(), std::back_inserter(images), is_image);
      if (!images.empty()) {
        std::string summary = "Chart saved to:";
        for (const auto& p : images) summary += " " + p.filename().string();
        ToolResult r = ToolResult::success(summary);
        r.artifact_paths = images;
        return r;
      }
      if (attempt == 1) throw Error(ErrorKind::kNoArtifact, "the plotting code ran but wrote no image file");
      failure = "The script ran but did not save an image file. Save the figure with savefig.";
    } catch (const Error& e) {
      if (attempt == 1 || e.kind() != ErrorKind::kExecutionError) throw;
      failure = std::string("The script failed:\n") + e.what();
    }
    messages.push_back(llm::ChatMessage::user(failure + "\nReply with a corrected ```python block."));
  }
  throw Error(ErrorKind::kNoArtifact, "the plotting code wrote no image file");
}

}  // namespace esg::tools::detail
