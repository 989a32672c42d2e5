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

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "esg/llm/types.hpp"

namespace esg::llm {

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string id() const = 0;
  virtual ChatResponse chat(const ChatRequest& request, const std::string& model) = 0;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dimension() const = 0;
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
};

// Hashes padded, lowercased character trigrams into `dimension` buckets and
// L2-normalizes. Pure: identical text gives a bit-identical vector.
class StubEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kDefaultDimension = 256;

  explicit StubEmbedder(std::size_t dimension = kDefaultDimension) : dimension_(dimension) {}

  std::size_t dimension() const override { return dimension_; }
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;

  Embedding embed_one(std::string_view text) const;

 private:
  std::size_t dimension_;
};

struct ReplayEntry {
  std::optional<std::string> match;
  std::string response;
  Usage usage;
};

using ReplayTranscript = std::vector<ReplayEntry>;

// JSONL: {"match": str|null, "response": str, "prompt_tokens": n, "completion_tokens": n}
ReplayTranscript load_transcript(const std::filesystem::path& path);
void save_transcript(const ReplayTranscript& transcript, const std::filesystem::path& path);

// Serves scripted responses in transcript order. A request takes the first
// remaining entry it is eligible for; entries skipped over are discarded, so
// consumption is monotone.
class ReplayProvider final : public ChatProvider {
 public:
  explicit ReplayProvider(ReplayTranscript transcript, std::string id = "replay");

  std::string id() const override { return id_; }
  ChatResponse chat(const ChatRequest& request, const std::string& model) override;

  std::size_t served() const;
  std::size_t remaining() const;

 private:
  std::string id_;
  ReplayTranscript entries_;
  mutable std::mutex mu_;
  std::size_t cursor_ = 0;
  std::size_t served_ = 0;
};

}  // namespace esg::llm
