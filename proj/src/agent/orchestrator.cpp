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

#include "esg/agent/orchestrator.hpp"

#include <algorithm>
#include <sstream>

#include "esg/common/text.hpp"

namespace esg::agent {

using Clock = std::chrono::steady_clock;

std::string_view to_string(MemoryKind kind) {
  switch (kind) {
    case MemoryKind::kObservation: return "observation";
    case MemoryKind::kInsight: return "insight";
    case MemoryKind::kEntityFact: return "entity_fact";
  }
  return "insight";
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kDone: return "done";
    case RunStatus::kBudgetExhausted: return "budget_exhausted";
    case RunStatus::kError: return "error";
  }
  return "error";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kAccept: return "accept";
    case Verdict::kRetry: return "retry";
    case Verdict::kAcceptWithFailure: return "accept_with_failure";
  }
  return "accept";
}

int AgentConfig::budget(const std::string& role) const {
  const auto it = step_budget.find(role);
  if (it != step_budget.end()) return it->second;
  return role == "main" ? 50 : 3;
}

void AgentConfig::validate() const {
  for (const auto& [role, m] : step_budget) {
    if (m < 1) throw Error(ErrorKind::kConfigError, "step budget for '" + role + "' must be at least 1");
  }
  if (retrieval_top_k < 1) throw Error(ErrorKind::kConfigError, "retrieval_top_k must be at least 1");
  if (max_retries < 0) throw Error(ErrorKind::kConfigError, "max_retries must be non-negative");
  if (memory_every < 1) throw Error(ErrorKind::kConfigError, "memory cadence must be at least 1");
  if (observation_limit < 100) throw Error(ErrorKind::kConfigError, "observation limit is too small");
  const auto& canon = tools::ToolRegistry::canonical_names();
  for (const auto& t : disabled_tools) {
    if (std::find(canon.begin(), canon.end(), t) == canon.end()) {
      throw Error(ErrorKind::kUnknownToolName, "cannot disable unknown tool '" + t + "'");
    }
  }
}

namespace {

std::string system_prompt(const tools::ToolRegistry& registry, int budget) {
  std::ostringstream p;
  p << "You are ESGAgent, the main controller of a hierarchical multi-agent system for ESG analysis. Work step "
       "by step. In every reply, first explain your reasoning after \"Thinking:\", then make exactly one tool "
       "call as a fenced block whose info string is the tool name and whose body is a JSON object of "
       "arguments, for example:\n\n"
       "```retriever\n{\"query\": \"Scope 1 emissions 2023\", \"top_k\": 5}\n```\n\n"
       "Tool results come back in the next message. You have at most "
    << budget
    << " steps. Finish by calling done with the final answer; for closed questions the result must be the "
       "bare answer (a letter, true/false, a number or a short phrase). For report tasks, write the report "
       "with the report tool before calling done.\n\nAvailable tools:\n"
    << registry.describe();
  return p.str();
}

std::string relative_to(const fs::path& p, const fs::path& root) {
  const auto rel = p.lexically_relative(root);
  return rel.empty() ? p.filename().string() : rel.generic_string();
}

std::vector<fs::path> stage_attachments(const std::vector<fs::path>& attachments, const fs::path& workdir) {
  std::vector<fs::path> staged;
  for (const auto& a : attachments) {
    if (!fs::is_regular_file(a)) throw Error(ErrorKind::kMissingAttachment, "attachment not found: " + a.string());
    if (is_within(a, workdir)) {
      staged.push_back(fs::absolute(a).lexically_normal());
      continue;
    }
    auto target = workdir / a.filename();
    for (int n = 2; fs::exists(target); ++n) target = workdir / (std::to_string(n) + "_" + a.filename().string());
    fs::copy_file(a, target);
    staged.push_back(target);
  }
  return staged;
}

llm::Usage total_usage(const std::vector<tools::LlmCall>& calls) {
  llm::Usage u;
  for (const auto& c : calls) u += c.usage;
  return u;
}

bool verifiable(const std::string& tool) { return tool != "todo" && tool != "done"; }

}  // namespace

RunOutcome run(const RunRequest& request, const AgentConfig& config, llm::Gateway& gateway,
               const tools::ToolEnvironment& base_env) {
  if (text::trim(request.query).empty()) throw Error(ErrorKind::kArgValidation, "the query is empty");
  config.validate();
  const auto started = Clock::now();

  tools::ToolEnvironment env = base_env;
  env.researcher_budget = config.budget("deep_researcher");
  env.analyzer_budget = config.budget("deep_analyzer");
  env.retrieval_top_k = config.retrieval_top_k;
  const auto registry = tools::default_registry(env, config.disabled_tools);
  const int budget = config.budget("main");

  tools::LlmSession session(gateway);
  tools::ToolContext ctx(request.workdir, session, env);
  RunOutcome out;
  std::map<std::string, int> retries;
  std::vector<llm::ChatMessage> messages;

  // Calls made outside any step (the planner) are attached to the first one.
  std::optional<TraceStep> open;
  auto finish_step = [&](Clock::time_point step_start) {
    TraceStep step = std::move(*open);
    open.reset();
    step.index = out.trace.size();
    step.llm_calls = session.drain();
    step.usage = total_usage(step.llm_calls);
    step.duration_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - step_start).count();
    out.trace.push_back(std::move(step));
  };

  auto fail = [&](const Error& e) {
    out.status = RunStatus::kError;
    out.error = tools::ToolError{e.kind(), e.what()};
  };

  Clock::time_point step_start = Clock::now();
  try {
    const auto staged = stage_attachments(request.attachments, ctx.workdir());
    std::ostringstream first;
    first << request.query;
    if (!staged.empty()) {
      first << "\n\nAttached files (in your working directory):";
      for (const auto& s : staged) first << "\n- " << relative_to(s, ctx.workdir());
    }
    if (config.plan) {
      const auto planned = plan(session, request.query);
      for (const auto& step : planned.steps()) ctx.plan().add(step);
      first << "\n\nPlan:\n" << ctx.plan().render();
    }
    messages.push_back(llm::ChatMessage::system(system_prompt(registry, budget)));
    messages.push_back(llm::ChatMessage::user(first.str()));

    out.status = RunStatus::kBudgetExhausted;
    for (int i = 0; i < budget; ++i) {
      if (i > 0) step_start = Clock::now();
      if (i > 0 && Clock::now() - started > config.timeout) {
        throw Error(ErrorKind::kTimeout, "the run exceeded its wall-clock limit");
      }
      auto& step = open.emplace();
      const auto reply = session.complete("main", messages);
      messages.push_back(llm::ChatMessage::assistant(reply.content.empty() ? "(empty reply)" : reply.content));
      auto action = parse_action(reply.content);
      step.thinking = action.thinking;

      if (!action.call) {
        step.ok = false;
        step.error = tools::ToolError{ErrorKind::kArgValidation, action.problem};
        step.observation = action.problem;
        step.output_digest = sha256_hex(action.problem).substr(0, 16);
        messages.push_back(llm::ChatMessage::system(action.problem));
        finish_step(step_start);
        continue;
      }

      const auto result = registry.invoke(*action.call, ctx);
      const auto& record = ctx.records().back();
      step.tool_call = record.call;
      step.ok = result.ok;
      step.error = result.error;
      step.observation = result.summary;
      step.output_digest = record.output_digest;
      for (const auto& a : result.artifact_paths) {
        step.artifacts.push_back(relative_to(a, ctx.workdir()));
        if (std::find(out.artifacts.begin(), out.artifacts.end(), a) == out.artifacts.end()) out.artifacts.push_back(a);
        if (record.call.tool == "report" && result.ok) out.report_path = a;
      }
      const auto step_index = out.trace.size();
      for (const auto& ev : result.evidence) out.evidence.push_back({step_index, record.call.tool, ev});
      if (result.ok && verifiable(record.call.tool)) {
        out.memory.push_back({MemoryKind::kObservation, text::truncate(result.summary, 300), step_index, {}});
      }
      messages.push_back(llm::ChatMessage::tool(
          record.call.tool, "[" + record.call.call_id + "] " + text::truncate(result.summary, config.observation_limit)));

      if (ctx.termination()) {
        out.status = RunStatus::kDone;
        out.final_answer = ctx.termination()->final_answer;
        out.reasoning = ctx.termination()->reasoning;
        finish_step(step_start);
        break;
      }

      if (config.verify && result.ok && verifiable(record.call.tool)) {
        if (const auto* current = ctx.plan().current()) {
          const auto id = current->step_id;
          if (current->status == tools::StepStatus::kPending) ctx.plan().start(id);
          const auto v = verify_and_refine(session, *ctx.plan().find(id), result, config.max_retries - retries[id]);
          switch (v.verdict) {
            case Verdict::kAccept:
              ctx.plan().complete(id, tools::StepStatus::kDone, text::truncate(result.summary, 500));
              break;
            case Verdict::kRetry:
              ++retries[id];
              messages.push_back(llm::ChatMessage::user("Verifier: the result does not yet satisfy plan step '" + id +
                                                        "'. " + v.reason + " Refine the approach and try again."));
              break;
            case Verdict::kAcceptWithFailure:
              ctx.plan().complete(id, tools::StepStatus::kFailed, v.reason);
              messages.push_back(llm::ChatMessage::user("Verifier: plan step '" + id +
                                                        "' is marked failed after repeated attempts. Move on."));
              break;
          }
        }
      }

      if ((i + 1) % config.memory_every == 0 && i + 1 < budget) {
        const auto from = out.trace.size() + 1 > static_cast<std::size_t>(config.memory_every)
                              ? out.trace.size() + 1 - static_cast<std::size_t>(config.memory_every)
                              : 0;
        std::vector<TraceStep> window(out.trace.begin() + static_cast<std::ptrdiff_t>(from), out.trace.end());
        window.push_back(step);
        window.back().index = step_index;
        auto insights = memory_synthesize(session, window, config.memory_max_insights);
        if (!insights.empty()) {
          std::string note = "Run memory:";
          for (const auto& e : insights) note += "\n- " + e.text;
          messages.push_back(llm::ChatMessage::system(note));
        }
        for (auto& e : insights) out.memory.push_back(std::move(e));
      }
      finish_step(step_start);
    }
  } catch (const Error& e) {
    fail(e);
  } catch (const std::exception& e) {
    fail(Error(ErrorKind::kIoError, e.what()));
  }
  // A step interrupted after its tool ran is still recorded.
  if (open && open->tool_call) finish_step(step_start);
  // Any calls left over (a failed step) still belong to the trace.
  if (auto rest = session.drain(); !rest.empty()) {
    if (out.trace.empty()) {
      TraceStep s;
      s.ok = false;
      s.error = out.error;
      s.llm_calls = std::move(rest);
      s.usage = total_usage(s.llm_calls);
      out.trace.push_back(std::move(s));
    } else {
      auto& last = out.trace.back();
      for (auto& c : rest) {
        last.usage += c.usage;
        last.llm_calls.push_back(std::move(c));
      }
    }
  }
  for (const auto& s : out.trace) out.usage += s.usage;
  out.llm_calls = session.total_calls();
  out.plan = ctx.plan().steps();
  out.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started).count();
  return out;
}

}  // namespace esg::agent
