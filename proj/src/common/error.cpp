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

#include "esg/common/error.hpp"

namespace esg {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknownRole: return "UnknownRole";
    case ErrorKind::kProviderError: return "ProviderError";
    case ErrorKind::kTranscriptExhausted: return "TranscriptExhausted";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::kEmptyDocument: return "EmptyDocument";
    case ErrorKind::kInvalidChunking: return "InvalidChunking";
    case ErrorKind::kMalformedExtraction: return "MalformedExtraction";
    case ErrorKind::kEmptyIndex: return "EmptyIndex";
    case ErrorKind::kIoError: return "IoError";
    case ErrorKind::kDuplicateTool: return "DuplicateTool";
    case ErrorKind::kUnknownToolName: return "UnknownToolName";
    case ErrorKind::kToolDisabled: return "ToolDisabled";
    case ErrorKind::kUnknownTool: return "UnknownTool";
    case ErrorKind::kArgValidation: return "ArgValidation";
    case ErrorKind::kBackendUnavailable: return "BackendUnavailable";
    case ErrorKind::kBudgetExhausted: return "BudgetExhausted";
    case ErrorKind::kSandboxUnavailable: return "SandboxUnavailable";
    case ErrorKind::kExecutionError: return "ExecutionError";
    case ErrorKind::kTimeout: return "Timeout";
    case ErrorKind::kNoArtifact: return "NoArtifact";
    case ErrorKind::kDanglingCitation: return "DanglingCitation";
    case ErrorKind::kUnknownStep: return "UnknownStep";
    case ErrorKind::kDuplicateStep: return "DuplicateStep";
    case ErrorKind::kJailViolation: return "JailViolation";
    case ErrorKind::kAlreadyTerminated: return "AlreadyTerminated";
    case ErrorKind::kUnnormalizable: return "Unnormalizable";
    case ErrorKind::kMalformedReport: return "MalformedReport";
    case ErrorKind::kNoCitations: return "NoCitations";
    case ErrorKind::kJudgeFormatError: return "JudgeFormatError";
    case ErrorKind::kNoJudges: return "NoJudges";
    case ErrorKind::kBadCapabilityId: return "BadCapabilityId";
    case ErrorKind::kSchemaError: return "SchemaError";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kMissingAttachment: return "MissingAttachment";
    case ErrorKind::kInconsistentCounts: return "InconsistentCounts";
    case ErrorKind::kMissingReport: return "MissingReport";
    case ErrorKind::kUsageError: return "UsageError";
    case ErrorKind::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace esg
