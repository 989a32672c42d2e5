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
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esg/llm/types.hpp"

namespace esg::retrieval {

struct DocumentMetadata {
  std::optional<std::string> company;
  std::optional<int> year;
  std::optional<std::string> kind;
};

struct Document {
  std::string doc_id;
  std::filesystem::path source_path;
  std::string title;
  std::string body;
  DocumentMetadata metadata;
};

// Maps a lowercase file extension (".pdf") to a text extractor. Plain text and
// markdown are built in; PDF, image and audio formats need a registered
// extractor.
class ExtractorRegistry {
 public:
  using Extractor = std::function<std::string(const std::filesystem::path&)>;

  static ExtractorRegistry with_builtins();

  void register_extractor(const std::string& extension, Extractor extractor);
  bool supports(const std::filesystem::path& path) const;
  // Throws UnsupportedFormat, IoError.
  std::string extract(const std::filesystem::path& path) const;

 private:
  std::map<std::string, Extractor> extractors_;
};

const ExtractorRegistry& default_extractors();

// Extracts and stores a document; doc_id is the first 16 hex digits of the
// body's SHA-256. Throws UnsupportedFormat, EmptyDocument, IoError.
Document ingest(const std::filesystem::path& source_path, DocumentMetadata metadata = {},
                const ExtractorRegistry& extractors = default_extractors());

struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  std::size_t ordinal = 0;
  std::string text;
  llm::Embedding embedding;
};

// Splits the body into windows of `size` code points advancing by
// size - overlap. Throws InvalidChunking when size == 0 or overlap >= size.
std::vector<Chunk> chunk(const Document& document, std::size_t size, std::size_t overlap);

// Inverse of chunk(): joins chunks dropping the leading `overlap` code points
// of every chunk after the first.
std::string reconstruct(const std::vector<Chunk>& chunks, std::size_t overlap);

}  // namespace esg::retrieval
