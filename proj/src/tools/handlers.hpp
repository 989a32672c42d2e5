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

#include "esg/tools/tool.hpp"

namespace esg::tools::detail {

ToolResult run_done(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_todo(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_reformulator(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_converter(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_bash(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_retriever(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_web_search(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_deep_researcher(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_deep_analyzer(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_code_interpreter(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_plotter(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);
ToolResult run_report(const ToolCall& call, ToolContext& ctx, const std::vector<const ToolRecord*>& prior);

// Executes code in the run's sandbox; nonzero exits and timeouts are thrown
// as ExecutionError / Timeout.
ExecResult execute_checked(ToolContext& ctx, const std::string& code);

// Text of prior calls to the same tool, for the prompt of multi-turn tools.
std::string prior_digest(const std::vector<const ToolRecord*>& prior, std::size_t max_items = 3);

}  // namespace esg::tools::detail
