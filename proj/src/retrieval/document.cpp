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

#include "esg/retrieval/document.hpp"

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"
#include "esg/common/text.hpp"

namespace esg::retrieval {

namespace {

std::string extension_of(const std::filesystem::path& path) {
  return text::to_lower(path.extension().string());
}

std::string read_text(const std::filesystem::path& path) { return read_file(path); }

std::string derive_title(const std::filesystem::path& path, const std::string& body) {
  for (const auto& line : text::split_lines(body)) {
    const auto t = text::trim(line);
    if (t.starts_with("# ")) return text::trim(t.substr(2));
    if (!t.empty()) break;
  }
  return path.stem().string();
}

}  // namespace

ExtractorRegistry ExtractorRegistry::with_builtins() {
  ExtractorRegistry r;
  for (const char* ext : {".txt", ".md", ".markdown", ".text"}) r.register_extractor(ext, read_text);
  return r;
}

void ExtractorRegistry::register_extractor(const std::string& extension, Extractor extractor) {
  extractors_[text::to_lower(extension)] = std::move(extractor);
}

bool ExtractorRegistry::supports(const std::filesystem::path& path) const {
  return extractors_.count(extension_of(path)) != 0;
}

std::string ExtractorRegistry::extract(const std::filesystem::path& path) const {
  const auto it = extractors_.find(extension_of(path));
  if (it == extractors_.end()) {
    throw Error(ErrorKind::kUnsupportedFormat,
                "no extractor registered for '" + path.extension().string() + "' (" +
                    path.filename().string() + ")");
  }
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::kIoError, "no such file " + path.string());
  return it->second(path);
}

const ExtractorRegistry& default_extractors() {
  static const ExtractorRegistry registry = ExtractorRegistry::with_builtins();
  return registry;
}

Document ingest(const std::filesystem::path& source_path, DocumentMetadata metadata,
                const ExtractorRegistry& extractors) {
  if (!std::filesystem::exists(source_path)) {
    throw Error(ErrorKind::kIoError, "no such file " + source_path.string());
  }
  Document doc;
  doc.body = extractors.extract(source_path);
  if (text::trim(doc.body).empty()) {
    throw Error(ErrorKind::kEmptyDocument, source_path.string() + " has no extractable text");
  }
  doc.doc_id = sha256_hex(doc.body).substr(0, 16);
  doc.source_path = source_path;
  doc.title = derive_title(source_path, doc.body);
  doc.metadata = std::move(metadata);
  return doc;
}

std::vector<Chunk> chunk(const Document& document, std::size_t size, std::size_t overlap) {
  if (size == 0 || overlap >= size) {
    throw Error(ErrorKind::kInvalidChunking, "chunk overlap " + std::to_string(overlap) +
                                                 " must be smaller than size " + std::to_string(size));
  }
  const auto offsets = text::codepoint_offsets(document.body);
  const std::size_t n = offsets.size() - 1;
  const std::size_t stride = size - overlap;
  std::vector<Chunk> chunks;
  for (std::size_t start = 0;; start += stride) {
    const std::size_t end = std::min(n, start + size);
    Chunk c;
    c.doc_id = document.doc_id;
    c.ordinal = chunks.size();
    c.chunk_id = document.doc_id + "#" + std::to_string(c.ordinal);
    c.text = document.body.substr(offsets[start], offsets[end] - offsets[start]);
    chunks.push_back(std::move(c));
    if (end >= n) break;
  }
  return chunks;
}

std::string reconstruct(const std::vector<Chunk>& chunks, std::size_t overlap) {
  std::string out;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    if (i == 0) {
      out += chunks[i].text;
      continue;
    }
    const auto offsets = text::codepoint_offsets(chunks[i].text);
    const auto skip = std::min(overlap, offsets.size() - 1);
    out += chunks[i].text.substr(offsets[skip]);
  }
  return out;
}

}  // namespace esg::retrieval
