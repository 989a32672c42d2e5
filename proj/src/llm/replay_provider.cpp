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

#include <chrono>
#include <fstream>

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"
#include "esg/common/text.hpp"
#include "esg/llm/provider.hpp"

namespace esg::llm {

ReplayTranscript load_transcript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIoError, "cannot open transcript " + path.string());
  ReplayTranscript entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("response") ||
        !j["response"].is_string()) {
      throw Error(ErrorKind::kSchemaError,
                  path.string() + ":" + std::to_string(line_no) + ": bad transcript entry");
    }
    ReplayEntry e;
    if (j.contains("match") && j["match"].is_string()) e.match = j["match"].get<std::string>();
    e.response = j["response"].get<std::string>();
    e.usage.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
    e.usage.completion_tokens = j.value("completion_tokens", std::int64_t{0});
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_transcript(const ReplayTranscript& transcript, const std::filesystem::path& path) {
  std::string out;
  for (const auto& e : transcript) {
    Json j;
    j["match"] = e.match ? Json(*e.match) : Json(nullptr);
    j["response"] = e.response;
    j["prompt_tokens"] = e.usage.prompt_tokens;
    j["completion_tokens"] = e.usage.completion_tokens;
    out += dump_line(j) + "\n";
  }
  write_file(path, out);
}

ReplayProvider::ReplayProvider(ReplayTranscript transcript, std::string id)
    : id_(std::move(id)), entries_(std::move(transcript)) {}

ChatResponse ReplayProvider::chat(const ChatRequest& request, const std::string& /*model*/) {
  const auto started = std::chrono::steady_clock::now();
  const std::string& last = request.messages.empty() ? std::string() : request.messages.back().content;
  std::lock_guard lock(mu_);
  for (std::size_t i = cursor_; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.match && last.find(*e.match) == std::string::npos) continue;
    cursor_ = i + 1;
    ++served_;
    ChatResponse r;
    r.content = e.response;
    r.usage = e.usage;
    r.provider_id = id_;
    r.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    return r;
  }
  throw Error(ErrorKind::kTranscriptExhausted,
              "replay transcript has no entry for role " + request.model_role + " (served " +
                  std::to_string(served_) + ")");
}

std::size_t ReplayProvider::served() const {
  std::lock_guard lock(mu_);
  return served_;
}

std::size_t ReplayProvider::remaining() const {
  std::lock_guard lock(mu_);
  return entries_.size() - cursor_;
}

}  // namespace esg::llm
