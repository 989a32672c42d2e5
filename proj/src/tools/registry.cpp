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
#include <cstdio>
#include <sstream>

#include "esg/common/text.hpp"
#include "esg/tools/tool.hpp"

namespace esg::tools {

std::string_view to_string(ArgType type) {
  switch (type) {
    case ArgType::kText: return "text";
    case ArgType::kInt: return "int";
    case ArgType::kReal: return "real";
    case ArgType::kBool: return "bool";
    case ArgType::kPath: return "path";
    case ArgType::kList: return "list";
    case ArgType::kObject: return "object";
  }
  return "text";
}

ToolResult ToolResult::success(std::string summary) {
  ToolResult r;
  r.summary = std::move(summary);
  return r;
}

ToolResult ToolResult::failure(ErrorKind kind, std::string message) {
  ToolResult r;
  r.ok = false;
  r.summary = "Error (" + std::string(to_string(kind)) + "): " + message;
  r.error = ToolError{kind, std::move(message)};
  return r;
}

llm::ChatResponse LlmSession::complete(llm::ChatRequest request) {
  auto response = gateway_.complete(request);
  pending_.push_back({request.model_role, response.usage, response.latency_ms});
  ++per_role_[request.model_role];
  ++total_;
  return response;
}

llm::ChatResponse LlmSession::complete(const std::string& role, std::vector<llm::ChatMessage> messages) {
  llm::ChatRequest req;
  req.model_role = role;
  req.temperature = llm::default_temperature(role);
  req.messages = std::move(messages);
  return complete(std::move(req));
}

std::vector<LlmCall> LlmSession::drain() {
  std::vector<LlmCall> out;
  out.swap(pending_);
  return out;
}

std::size_t LlmSession::calls_for(std::string_view role) const {
  const auto it = per_role_.find(role);
  return it == per_role_.end() ? 0 : it->second;
}

ToolContext::ToolContext(std::filesystem::path workdir, LlmSession& llm, const ToolEnvironment& env)
    : workdir_(fs::absolute(workdir).lexically_normal()), llm_(llm), env_(env) {
  fs::create_directories(workdir_);
}

void ToolContext::terminate(std::string final_answer, std::string reasoning) {
  if (termination_) throw Error(ErrorKind::kAlreadyTerminated, "the run has already terminated");
  termination_ = Termination{text::trim(final_answer), std::move(reasoning)};
}

std::vector<const ToolRecord*> ToolContext::history(std::string_view tool) const {
  std::vector<const ToolRecord*> out;
  for (const auto& r : records_) {
    if (r.call.tool == tool) out.push_back(&r);
  }
  return out;
}

std::filesystem::path ToolContext::resolve_inside(const std::filesystem::path& p) const {
  const auto full = (p.is_absolute() ? p : workdir_ / p).lexically_normal();
  if (!is_within(full, workdir_)) {
    throw Error(ErrorKind::kJailViolation, "path " + p.string() + " is outside the run directory");
  }
  return full;
}

SandboxClient& ToolContext::sandbox() {
  if (!sandbox_) sandbox_ = std::make_unique<SandboxClient>(env_.sandbox_command);
  return *sandbox_;
}

std::string ToolContext::next_call_id(std::string_view tool) {
  auto& n = call_counter_[std::string(tool)];
  ++n;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", n);
  return std::string(tool) + "_" + buf;
}

const std::vector<std::string>& ToolRegistry::canonical_names() {
  static const std::vector<std::string> names = {"converter", "deep_analyzer", "code_interpreter", "retriever",
                                                 "deep_researcher", "web_search", "plotter", "report",
                                                 "reformulator", "todo", "bash", "done"};
  return names;
}

const ToolRegistry::Entry* ToolRegistry::find(std::string_view name) const {
  for (const auto& e : entries_) {
    if (e.spec.name == name) return &e;
  }
  return nullptr;
}

void ToolRegistry::register_tool(ToolSpec spec, ToolHandler handler, bool enabled) {
  const auto& canon = canonical_names();
  if (std::find(canon.begin(), canon.end(), spec.name) == canon.end()) {
    throw Error(ErrorKind::kUnknownToolName, "'" + spec.name + "' is not a recognised tool name");
  }
  if (find(spec.name)) throw Error(ErrorKind::kDuplicateTool, "tool '" + spec.name + "' is already registered");
  entries_.push_back({std::move(spec), std::move(handler), enabled});
}

void ToolRegistry::set_enabled(const std::string& name, bool enabled) {
  for (auto& e : entries_) {
    if (e.spec.name == name) {
      e.enabled = enabled;
      return;
    }
  }
  throw Error(ErrorKind::kUnknownTool, "tool '" + name + "' is not registered");
}

bool ToolRegistry::is_registered(std::string_view name) const { return find(name) != nullptr; }

bool ToolRegistry::is_enabled(std::string_view name) const {
  const auto* e = find(name);
  return e && e->enabled;
}

const ToolSpec& ToolRegistry::spec(std::string_view name) const {
  const auto* e = find(name);
  if (!e) throw Error(ErrorKind::kUnknownTool, "tool '" + std::string(name) + "' is not registered");
  return e->spec;
}

std::vector<std::string> ToolRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.spec.name);
  return out;
}

std::vector<std::string> ToolRegistry::enabled_names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.enabled) out.push_back(e.spec.name);
  }
  return out;
}

void validate_args(const ToolSpec& spec, const Json& args) {
  if (!args.is_object()) throw Error(ErrorKind::kArgValidation, spec.name + ": arguments must be a JSON object");
  for (const auto& [name, arg] : spec.arg_schema) {
    const bool present = args.contains(name) && !args[name].is_null();
    if (!present) {
      if (arg.required) throw Error(ErrorKind::kArgValidation, spec.name + ": missing required argument '" + name + "'");
      continue;
    }
    const auto& v = args[name];
    bool ok = false;
    switch (arg.type) {
      case ArgType::kText: ok = v.is_string(); break;
      case ArgType::kPath: ok = v.is_string() && !v.get<std::string>().empty(); break;
      case ArgType::kInt: ok = v.is_number_integer(); break;
      case ArgType::kReal: ok = v.is_number(); break;
      case ArgType::kBool: ok = v.is_boolean(); break;
      case ArgType::kList: ok = v.is_array(); break;
      case ArgType::kObject: ok = v.is_object(); break;
    }
    if (!ok) {
      throw Error(ErrorKind::kArgValidation, spec.name + ": argument '" + name + "' must be of type " +
                                                 std::string(to_string(arg.type)) + ", got " + v.dump());
    }
  }
}

std::optional<std::string> opt_string(const Json& args, const std::string& key) {
  if (!args.contains(key) || !args[key].is_string()) return std::nullopt;
  return args[key].get<std::string>();
}

std::optional<std::int64_t> opt_int(const Json& args, const std::string& key) {
  if (!args.contains(key) || !args[key].is_number_integer()) return std::nullopt;
  return args[key].get<std::int64_t>();
}

std::string required_string(const Json& args, const std::string& key) {
  auto v = opt_string(args, key);
  if (!v || text::trim(*v).empty()) throw Error(ErrorKind::kArgValidation, "argument '" + key + "' must be non-empty");
  return *v;
}

ToolResult ToolRegistry::invoke(ToolCall call, ToolContext& ctx) const {
  const auto started = std::chrono::steady_clock::now();
  if (call.call_id.empty()) call.call_id = ctx.next_call_id(call.tool);
  if (call.args.is_null()) call.args = Json::object();
  ToolResult result;
  const Entry* entry = find(call.tool);
  try {
    if (!entry) throw Error(ErrorKind::kUnknownTool, "tool '" + call.tool + "' is not registered");
    if (!entry->enabled) throw Error(ErrorKind::kToolDisabled, "tool '" + call.tool + "' is disabled for this run");
    validate_args(entry->spec, call.args);
    const auto prior = ctx.history(call.tool);
    result = entry->handler(call, ctx, prior);
    for (auto& p : result.artifact_paths) {
      p = p.lexically_normal();
      if (!fs::exists(p) || !is_within(p, ctx.workdir())) {
        throw Error(ErrorKind::kJailViolation, "artifact " + p.string() + " is missing or outside the run directory");
      }
    }
  } catch (const Error& e) {
    result = ToolResult::failure(e.kind(), e.what());
  } catch (const std::exception& e) {
    result = ToolResult::failure(ErrorKind::kExecutionError, e.what());
  }
  ToolRecord record;
  record.call = std::move(call);
  record.result = result;
  record.output_digest = sha256_hex(result.summary).substr(0, 16);
  record.duration_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
  ctx.add_record(std::move(record));
  return result;
}

std::string ToolRegistry::describe() const {
  std::ostringstream out;
  for (const auto& e : entries_) {
    if (!e.enabled) continue;
    out << "- " << e.spec.name << ": " << e.spec.description << "\n  args: {";
    bool first = true;
    for (const auto& [name, arg] : e.spec.arg_schema) {
      out << (first ? "" : ", ") << name << ": " << to_string(arg.type) << (arg.required ? "" : "?");
      first = false;
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace esg::tools
