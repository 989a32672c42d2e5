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

#include <stdexcept>
#include <string>
#include <string_view>

namespace esg {

// Every failure surfaced by the library carries one of these kinds so callers
// (the orchestrator, the CLI, tests) can branch without parsing messages.
enum class ErrorKind {
  kUnknownRole,
  kProviderError,
  kTranscriptExhausted,
  kEmptyInput,
  kUnsupportedFormat,
  kEmptyDocument,
  kInvalidChunking,
  kMalformedExtraction,
  kEmptyIndex,
  kIoError,
  kDuplicateTool,
  kUnknownToolName,
  kToolDisabled,
  kUnknownTool,
  kArgValidation,
  kBackendUnavailable,
  kBudgetExhausted,
  kSandboxUnavailable,
  kExecutionError,
  kTimeout,
  kNoArtifact,
  kDanglingCitation,
  kUnknownStep,
  kDuplicateStep,
  kJailViolation,
  kAlreadyTerminated,
  kUnnormalizable,
  kMalformedReport,
  kNoCitations,
  kJudgeFormatError,
  kNoJudges,
  kBadCapabilityId,
  kSchemaError,
  kDuplicateId,
  kMissingAttachment,
  kInconsistentCounts,
  kMissingReport,
  kUsageError,
  kConfigError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown by providers for failures worth retrying (connection loss, 429, 5xx).
class TransientError : public Error {
 public:
  explicit TransientError(const std::string& message)
      : Error(ErrorKind::kProviderError, message) {}
};

}  // namespace esg
