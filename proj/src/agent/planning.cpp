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
#include <sstream>

#include "esg/agent/orchestrator.hpp"
#include "esg/common/fenced.hpp"
#include "esg/common/text.hpp"
#include "esg/retrieval/entity_graph.hpp"

namespace esg::agent {

namespace {

constexpr const char* kPlannerPrompt =
    "You are the planning agent of an ESG analysis system. Decompose the user's query into a short ordered "
    "list of concrete subtasks (usually 2 to 6). Reply with a JSON array of objects "
    "{\"step_id\": \"snake_case_id\", \"description\": \"...\", \"priority\": \"high|medium|low\", "
    "\"category\": \"research|analysis|writing|answer\"}.";

std::string unique_id(const tools::PlanLedger& ledger, std::string id) {
  if (id.empty()) id = "step_" + std::to_string(ledger.steps().size() + 1);
  if (!ledger.find(id)) return id;
  for (int n = 2;; ++n) {
    const auto candidate = id + "_" + std::to_string(n);
    if (!ledger.find(candidate)) return candidate;
  }
}

std::string json_text(const Json& obj, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (obj.contains(k) && obj[k].is_string()) return text::trim(obj[k].get<std::string>());
  }
  return {};
}

}  // namespace

tools::PlanLedger plan(tools::LlmSession& llm, const std::string& query) {
  if (text::trim(query).empty()) throw Error(ErrorKind::kArgValidation, "cannot plan an empty query");
  const auto reply = llm.complete("planner", {llm::ChatMessage::system(kPlannerPrompt), llm::ChatMessage::user(query)});
  tools::PlanLedger ledger;
  auto parsed = find_json(reply.content);
  if (parsed && parsed->is_object() && parsed->contains("steps")) parsed = (*parsed)["steps"];
  if (parsed && parsed->is_array()) {
    for (const auto& item : *parsed) {
      tools::PlanStep step;
      if (item.is_string()) {
        step.description = text::trim(item.get<std::string>());
      } else if (item.is_object()) {
        step.description = json_text(item, {"description", "task", "step"});
        step.step_id = json_text(item, {"step_id", "id"});
        if (auto p = json_text(item, {"priority"}); !p.empty()) step.priority = p;
        if (auto c = json_text(item, {"category"}); !c.empty()) step.category = c;
      }
      if (step.description.empty()) continue;
      step.step_id = unique_id(ledger, tools::sanitize_id(step.step_id));
      ledger.add(std::move(step));
    }
  }
  if (ledger.empty()) {
    tools::PlanStep all;
    all.step_id = "answer_query";
    all.description = "Answer the query: " + text::trim(query);
    all.priority = "high";
    ledger.add(std::move(all));
  }
  return ledger;
}

namespace {

constexpr const char* kVerifierPrompt =
    "You check whether a tool result accomplishes one subtask of a plan. Reply with JSON "
    "{\"verdict\": \"satisfied\" or \"unsatisfied\", \"reason\": \"one sentence\"}.";

}  // namespace

Verification verify_and_refine(tools::LlmSession& llm, const tools::PlanStep& subtask,
                               const tools::ToolResult& result, int attempts_left) {
  std::ostringstream user;
  user << "Subtask: " << subtask.description << "\n\nTool result:\n" << text::truncate(result.summary, 4000);
  const auto reply = llm.complete("verifier", {llm::ChatMessage::system(kVerifierPrompt),
                                               llm::ChatMessage::user(user.str())});
  std::string verdict;
  std::string reason;
  if (const auto j = find_json(reply.content); j && j->is_object()) {
    verdict = text::to_lower(json_text(*j, {"verdict", "status"}));
    reason = json_text(*j, {"reason"});
  }
  if (verdict.empty()) {
    const auto lower = text::to_lower(reply.content);
    verdict = lower.find("unsatisfied") != std::string::npos || lower.find("not satisfied") != std::string::npos
                  ? "unsatisfied"
                  : "satisfied";
    reason = text::trim(reply.content);
  }
  if (verdict != "unsatisfied") return {Verdict::kAccept, reason};
  return {attempts_left > 0 ? Verdict::kRetry : Verdict::kAcceptWithFailure, reason};
}

namespace {

constexpr const char* kMemoryPrompt =
    "You maintain the working memory of a research agent. From the recent steps, distil the durable insights "
    "(facts found, figures computed, dead ends). Reply with JSON {\"insights\": [{\"text\": \"...\", "
    "\"source_step\": n, \"entities\": [\"...\"]}]} listing at most five insights.";

}  // namespace

std::vector<MemoryEntry> memory_synthesize(tools::LlmSession& llm, const std::vector<TraceStep>& window,
                                           std::size_t max_insights) {
  if (window.empty()) throw Error(ErrorKind::kArgValidation, "memory synthesis needs at least one step");
  std::ostringstream user;
  bool any_output = false;
  for (const auto& s : window) {
    if (!s.tool_call) continue;
    any_output = true;
    user << "Step " << s.index << " (" << s.tool_call->tool << "): " << text::truncate(s.observation, 1500) << "\n\n";
  }
  if (!any_output) return {};
  const auto reply = llm.complete("memory", {llm::ChatMessage::system(kMemoryPrompt), llm::ChatMessage::user(user.str())});
  auto parsed = find_json(reply.content);
  if (parsed && parsed->is_object() && parsed->contains("insights")) parsed = (*parsed)["insights"];
  if (!parsed || !parsed->is_array()) return {};

  struct Raw {
    std::string text;
    std::size_t step;
    MemoryKind kind;
    std::vector<std::string> names;
  };
  std::vector<Raw> raws;
  std::vector<retrieval::EntityNode> nodes;
  for (const auto& item : *parsed) {
    if (raws.size() == max_insights) break;
    Raw r{{}, window.back().index, MemoryKind::kInsight, {}};
    if (item.is_string()) {
      r.text = text::trim(item.get<std::string>());
    } else if (item.is_object()) {
      r.text = json_text(item, {"text", "insight", "fact"});
      if (item.contains("source_step") && item["source_step"].is_number_integer()) {
        const auto s = item["source_step"].get<std::int64_t>();
        if (std::any_of(window.begin(), window.end(),
                        [&](const TraceStep& t) { return static_cast<std::int64_t>(t.index) == s; })) {
          r.step = static_cast<std::size_t>(s);
        }
      }
      if (json_text(item, {"kind"}) == "entity_fact") r.kind = MemoryKind::kEntityFact;
      if (item.contains("entities") && item["entities"].is_array()) {
        for (const auto& e : item["entities"]) {
          if (!e.is_string() || text::trim(e.get<std::string>()).empty()) continue;
          r.names.push_back(text::trim(e.get<std::string>()));
          retrieval::EntityNode node;
          node.canonical_name = r.names.back();
          node.aliases = {r.names.back()};
          nodes.push_back(std::move(node));
        }
      }
    }
    if (!r.text.empty()) raws.push_back(std::move(r));
  }
  std::map<std::string, std::string> canonical;
  for (const auto& node : retrieval::resolve_entities(std::move(nodes))) {
    for (const auto& alias : node.aliases) canonical[alias] = node.canonical_name;
  }
  std::vector<MemoryEntry> out;
  for (auto& r : raws) {
    MemoryEntry e{r.kind, std::move(r.text), r.step, {}};
    for (const auto& n : r.names) e.entities.insert(canonical.count(n) ? canonical[n] : n);
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

bool is_tool_label(const std::string& label) {
  const auto& names = tools::ToolRegistry::canonical_names();
  return std::find(names.begin(), names.end(), label) != names.end();
}

std::string canonical_label(std::string label) {
  label = text::to_lower(text::trim(label));
  if (label == "python_interpreter") return "code_interpreter";
  return label;
}

std::string strip_thinking_label(std::string s) {
  s = text::trim(s);
  for (const char* prefix : {"Thinking:", "Thought:", "thinking:"}) {
    if (s.starts_with(prefix)) return text::trim(s.substr(std::string_view(prefix).size()));
  }
  return s;
}

}  // namespace

ParsedAction parse_action(const std::string& reply) {
  ParsedAction out;
  for (const auto& block : fenced_blocks(reply)) {
    auto label = canonical_label(block.label);
    Json args;
    bool named = false;
    if (is_tool_label(label)) {
      named = true;
      try {
        args = Json::parse(block.body);
      } catch (const Json::exception&) {
        if (label == "code_interpreter") args = {{"code", block.body}};
        else if (label == "bash") args = {{"command", text::trim(block.body)}};
      }
    } else if (label == "json" || label == "tool" || label.empty()) {
      try {
        const auto j = Json::parse(block.body);
        const auto name = j.is_object() ? canonical_label(json_text(j, {"tool", "name"})) : std::string();
        if (!is_tool_label(name)) continue;
        named = true;
        label = name;
        args = j.contains("args") ? j["args"] : j.contains("arguments") ? j["arguments"] : Json::object();
      } catch (const Json::exception&) {
        continue;
      }
    }
    if (!named) continue;
    out.thinking = strip_thinking_label(reply.substr(0, block.begin));
    if (!args.is_object()) {
      out.problem = "The arguments for '" + label + "' must be a JSON object.";
      return out;
    }
    out.call = tools::ToolCall{label, std::move(args), {}};
    return out;
  }
  out.thinking = strip_thinking_label(reply);
  out.problem =
      "No tool call found. End every reply with exactly one fenced block whose info string is a tool name and "
      "whose body is the JSON arguments, for example:\n```done\n{\"result\": \"...\", \"reasoning\": \"...\"}\n```";
  return out;
}

}  // namespace esg::agent
