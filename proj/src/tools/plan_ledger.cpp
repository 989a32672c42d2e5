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

#include "esg/tools/plan_ledger.hpp"

#include <algorithm>
#include <sstream>

#include "esg/common/error.hpp"

namespace esg::tools {

std::string_view to_string(StepStatus status) {
  switch (status) {
    case StepStatus::kPending: return "pending";
    case StepStatus::kInProgress: return "in_progress";
    case StepStatus::kDone: return "done";
    case StepStatus::kFailed: return "failed";
  }
  return "pending";
}

PlanStep* PlanLedger::find_mutable(const std::string& step_id) {
  const auto it = std::find_if(steps_.begin(), steps_.end(), [&](const PlanStep& s) { return s.step_id == step_id; });
  return it == steps_.end() ? nullptr : &*it;
}

const PlanStep* PlanLedger::find(const std::string& step_id) const {
  return const_cast<PlanLedger*>(this)->find_mutable(step_id);
}

const PlanStep& PlanLedger::add(PlanStep step, const std::optional<std::string>& after_step_id) {
  if (step.step_id.empty()) throw Error(ErrorKind::kArgValidation, "step_id must be non-empty");
  if (find(step.step_id)) throw Error(ErrorKind::kDuplicateStep, "step '" + step.step_id + "' already exists");
  auto pos = steps_.end();
  if (after_step_id) {
    const auto it = std::find_if(steps_.begin(), steps_.end(),
                                 [&](const PlanStep& s) { return s.step_id == *after_step_id; });
    if (it == steps_.end()) throw Error(ErrorKind::kUnknownStep, "no step '" + *after_step_id + "' to insert after");
    pos = it + 1;
  }
  step.status = StepStatus::kPending;
  return *steps_.insert(pos, std::move(step));
}

void PlanLedger::start(const std::string& step_id) {
  auto* s = find_mutable(step_id);
  if (!s) throw Error(ErrorKind::kUnknownStep, "no step '" + step_id + "'");
  if (s->status == StepStatus::kInProgress) return;
  if (s->status != StepStatus::kPending) {
    throw Error(ErrorKind::kArgValidation, "step '" + step_id + "' is already " + std::string(to_string(s->status)));
  }
  s->status = StepStatus::kInProgress;
}

void PlanLedger::complete(const std::string& step_id, StepStatus status, std::optional<std::string> result) {
  if (status != StepStatus::kDone && status != StepStatus::kFailed) {
    throw Error(ErrorKind::kArgValidation, "a step can only complete as done or failed");
  }
  auto* s = find_mutable(step_id);
  if (!s) throw Error(ErrorKind::kUnknownStep, "no step '" + step_id + "'");
  start(step_id);
  s->status = status;
  if (result) s->result = std::move(result);
}

const PlanStep* PlanLedger::current() const {
  for (const auto& s : steps_) {
    if (s.status == StepStatus::kInProgress) return &s;
  }
  for (const auto& s : steps_) {
    if (s.status == StepStatus::kPending) return &s;
  }
  return nullptr;
}

std::string PlanLedger::render() const {
  std::ostringstream out;
  for (const auto& s : steps_) {
    out << "- [" << to_string(s.status) << "] " << s.step_id << ": " << s.description;
    if (s.result) out << " => " << *s.result;
    out << "\n";
  }
  return out.str();
}

}  // namespace esg::tools
