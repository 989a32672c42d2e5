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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esg::tools {

enum class StepStatus { kPending, kInProgress, kDone, kFailed };

std::string_view to_string(StepStatus status);

struct PlanStep {
  std::string step_id;
  std::string description;
  StepStatus status = StepStatus::kPending;
  std::optional<std::string> result;
  std::string priority = "medium";
  std::string category = "general";
};

// Ordered plan shared by the planner, the verifier and the todo tool.
// Status moves pending -> in_progress -> done|failed; completing a pending
// step passes through in_progress implicitly.
class PlanLedger {
 public:
  // Inserts after `after_step_id`, or appends when absent.
  // Throws DuplicateStep / UnknownStep.
  const PlanStep& add(PlanStep step, const std::optional<std::string>& after_step_id = std::nullopt);
  void start(const std::string& step_id);
  // `status` must be kDone or kFailed. Throws UnknownStep, or ArgValidation
  // when the step is already finished.
  void complete(const std::string& step_id, StepStatus status, std::optional<std::string> result = std::nullopt);

  const PlanStep* find(const std::string& step_id) const;
  // The in-progress step, else the first pending one.
  const PlanStep* current() const;
  const std::vector<PlanStep>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  std::string render() const;

 private:
  PlanStep* find_mutable(const std::string& step_id);
  std::vector<PlanStep> steps_;
};

}  // namespace esg::tools
