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
#include <sstream>

#include "esg/common/fenced.hpp"
#include "esg/common/subprocess.hpp"
#include "esg/common/text.hpp"
#include "esg/tools/builtin.hpp"
#include "handlers.hpp"

namespace esg::tools {

std::string clean_answer(std::string_view raw) {
  std::string s = text::trim(raw);
  const auto blocks = fenced_blocks(s);
  if (!blocks.empty()) s = text::trim(blocks.front().body);
  for (const char* label : {"final answer:", "answer:", "the answer is", "final answer is"}) {
    if (text::to_lower(s).starts_with(label)) {
      s = text::trim(s.substr(std::string_view(label).size()));
      break;
    }
  }
  while (s.size() >= 4 && s.starts_with("**") && s.ends_with("**")) s = text::trim(s.substr(2, s.size() - 4));
  while (s.size() >= 2) {
    const char a = s.front();
    const char b = s.back();
    if ((a == '"' && b == '"') || (a == '\'' && b == '\'') || (a == '`' && b == '`')) {
      s = text::trim(s.substr(1, s.size() - 2));
    } else {
      break;
    }
  }
  return s;
}

std::string sanitize_id(std::string_view id) {
  std::string out;
  for (unsigned char c : id) out += (std::isalnum(c) || c == '_' || c == '-') ? static_cast<char>(c) : '_';
  return out;
}

void check_command_jail(std::string_view command, const std::filesystem::path& workdir) {
  std::string token;
  auto check = [&](const std::string& t) {
    if (t.empty()) return;
    if (t.starts_with("~")) throw Error(ErrorKind::kJailViolation, "home-relative path '" + t + "' is not allowed");
    for (const auto& part : fs::path(t)) {
      if (part == "..") throw Error(ErrorKind::kJailViolation, "path '" + t + "' leaves the run directory");
    }
    if (t.starts_with("/") && t != "/dev/null" && !is_within(t, workdir)) {
      throw Error(ErrorKind::kJailViolation, "path '" + t + "' is outside the run directory");
    }
  };
  for (char c : command) {
    if (std::isspace(static_cast<unsigned char>(c)) || std::string_view(";|&<>()`'\"=").find(c) != std::string_view::npos) {
      check(token);
      token.clear();
    } else {
      token += c;
    }
  }
  check(token);
}

namespace detail {

std::string prior_digest(const std::vector<const ToolRecord*>& prior, std::size_t max_items) {
  std::ostringstream out;
  const std::size_t start = prior.size() > max_items ? prior.size() - max_items : 0;
  for (std::size_t i = start; i < prior.size(); ++i) {
    out << "- args " << dump_line(prior[i]->call.args) << " -> " << text::truncate(prior[i]->result.summary, 400)
        << "\n";
  }
  return out.str();
}

ToolResult run_done(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto result = call.args["result"].get<std::string>();
  ctx.terminate(result, opt_string(call.args, "reasoning").value_or(""));
  return ToolResult::success(ctx.termination()->final_answer);
}

namespace {

StepStatus completion_status(const std::string& raw) {
  const auto s = text::to_lower(text::trim(raw));
  if (s == "done" || s == "completed" || s == "complete" || s == "success") return StepStatus::kDone;
  if (s == "failed" || s == "failure" || s == "fail") return StepStatus::kFailed;
  throw Error(ErrorKind::kArgValidation, "todo status must be done or failed, got '" + raw + "'");
}

}  // namespace

ToolResult run_todo(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto action = text::to_lower(call.args["action"].get<std::string>());
  const auto step_id = required_string(call.args, "step_id");
  auto& plan = ctx.plan();
  if (action == "add") {
    PlanStep step;
    step.step_id = step_id;
    step.description = required_string(call.args, "task");
    step.priority = opt_string(call.args, "priority").value_or("medium");
    step.category = opt_string(call.args, "category").value_or("general");
    const auto after = opt_string(call.args, "after_step_id");
    plan.add(step, after);
    return ToolResult::success("Added step " + step_id + " after " + after.value_or("None") + ": " +
                               step.description + " (priority: " + step.priority + ")");
  }
  if (action == "complete") {
    const auto status = completion_status(opt_string(call.args, "status").value_or("done"));
    plan.complete(step_id, status, opt_string(call.args, "result"));
    return ToolResult::success("Completed step " + step_id + " with status: " + std::string(to_string(status)));
  }
  if (action == "start") {
    plan.start(step_id);
    return ToolResult::success("Started step " + step_id);
  }
  throw Error(ErrorKind::kArgValidation, "todo action must be add, start or complete, got '" + action + "'");
}

ToolResult run_reformulator(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto task = required_string(call.args, "task");
  const auto& data = call.args["data"];
  if (data.empty()) throw Error(ErrorKind::kArgValidation, "reformulator needs at least one data item");
  std::ostringstream user;
  user << "Task:\n" << task << "\n\nGathered information:\n";
  for (const auto& d : data) user << "- " << (d.is_string() ? d.get<std::string>() : d.dump()) << "\n";
  const auto reply = ctx.llm().complete(
      "reformulator",
      {llm::ChatMessage::system(
           "You turn research notes into the final answer to a question. Reply with the bare answer only: a "
           "single option letter for multiple choice, true or false for true/false questions, and the literal "
           "value for fill-in-the-blank questions. No explanation, no punctuation around the answer."),
       llm::ChatMessage::user(user.str())});
  auto answer = clean_answer(reply.content);
  if (answer.empty()) throw Error(ErrorKind::kExecutionError, "the reformulator produced an empty answer");
  return ToolResult::success(answer);
}

ToolResult run_converter(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto path = ctx.resolve_inside(call.args["path"].get<std::string>());
  const auto doc = retrieval::ingest(path, {}, ctx.env().extractors);
  ToolResult r = ToolResult::success(doc.body);
  r.evidence.push_back({"file://" + path.string(), doc.title, doc.body});
  return r;
}

ToolResult run_bash(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>&) {
  const auto command = required_string(call.args, "command");
  check_command_jail(command, ctx.workdir());
  ProcessOptions opts;
  opts.argv = {"/bin/sh", "-c", command};
  opts.cwd = ctx.workdir();
  opts.timeout = std::chrono::seconds(ctx.env().exec_timeout_s);
  opts.mem_limit_mb = static_cast<std::uint64_t>(ctx.env().exec_mem_limit_mb);
  const auto res = run_process(opts);
  if (res.timed_out) {
    throw Error(ErrorKind::kTimeout, "command exceeded " + std::to_string(ctx.env().exec_timeout_s) + " s");
  }
  if (res.exit_code != 0) {
    throw Error(ErrorKind::kExecutionError,
                "exit code " + std::to_string(res.exit_code) + (res.stderr_text.empty() ? "" : ": " + res.stderr_text));
  }
  std::string summary = "STDOUT:\n" + res.stdout_text;
  if (!res.stderr_text.empty()) summary += "\nSTDERR:\n" + res.stderr_text;
  return ToolResult::success(summary);
}

}  // namespace detail
}  // namespace esg::tools
