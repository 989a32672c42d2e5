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
#include <string>
#include <vector>

#include "esg/llm/types.hpp"
#include "esg/retrieval/document.hpp"
#include "esg/retrieval/entity_graph.hpp"
#include "esg/retrieval/similarity.hpp"

namespace esg::llm {
class Gateway;
}

namespace esg::retrieval {

enum class RetrievalMode { kVector, kHybrid };
enum class HitSource { kVector, kGraph };

std::string_view to_string(RetrievalMode mode);
RetrievalMode retrieval_mode_from_string(std::string_view s);
std::string_view to_string(HitSource via);

struct RetrievalHit {
  std::string chunk_id;
  std::string doc_id;
  std::size_t ordinal = 0;
  double score = 0.0;   // ranking key, non-increasing along a hit list
  double cosine = 0.0;  // raw query similarity of this chunk
  std::string snippet;
  HitSource via = HitSource::kVector;
  std::string title;

  // doc://<doc_id>#<ordinal>
  std::string uri() const;
};

struct RetrievalReport {
  std::string query;
  std::vector<RetrievalHit> hits;
  std::string synthesized_markdown;
  std::filesystem::path saved_path;
};

struct ChunkingOptions {
  std::size_t size = 1200;
  std::size_t overlap = 200;
};

// Chunk store with dense embeddings and an optional entity graph.
// Building is single-writer; search/retrieve are const and may run concurrently.
class KnowledgeIndex {
 public:
  explicit KnowledgeIndex(ChunkingOptions chunking = {});

  // Adds a document; re-adding an existing doc_id is a no-op.
  // Returns true when the document was new.
  bool add_document(Document document);

  // Chunks and embeds every document added since the last build.
  void build(llm::Gateway& gateway);

  // Runs LLM entity extraction over all chunks and installs the resolved graph.
  GraphExtraction build_graph(llm::Gateway& gateway, const ExtractionOptions& options = {});
  void set_graph(std::vector<EntityNode> nodes, std::vector<RelationEdge> edges);

  std::vector<RetrievalHit> search(std::string_view query, const llm::Embedding& query_embedding,
                                   std::size_t top_k, RetrievalMode mode) const;

  // Embeds the query, searches and writes retrieval_<hex>.md into `workdir`.
  RetrievalReport retrieve(std::string_view query, std::size_t top_k, RetrievalMode mode,
                           llm::Gateway& gateway, const std::filesystem::path& workdir) const;

  void save(const std::filesystem::path& dir) const;
  static KnowledgeIndex load(const std::filesystem::path& dir);

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<Chunk>& chunks() const { return chunks_; }
  const std::vector<EntityNode>& nodes() const { return nodes_; }
  const std::vector<RelationEdge>& edges() const { return edges_; }
  const ChunkingOptions& chunking() const { return chunking_; }
  bool empty() const { return chunks_.empty(); }
  const Chunk* find_chunk(std::string_view chunk_id) const;

 private:
  const Document* find_document(const std::string& doc_id) const;
  void append_chunk(Chunk chunk);
  RetrievalHit make_hit(std::size_t chunk_index, double score, double cosine, HitSource via) const;

  ChunkingOptions chunking_;
  std::vector<Document> documents_;
  std::size_t built_documents_ = 0;
  std::vector<Chunk> chunks_;
  EmbeddingMatrix matrix_;
  std::vector<EntityNode> nodes_;
  std::vector<RelationEdge> edges_;
};

// Deterministic extractive summary over the hits (no model call).
std::string extractive_synthesis(std::string_view query, const std::vector<RetrievalHit>& hits);

struct WrittenReport {
  std::filesystem::path path;
  std::string markdown;
};

// Writes retrieval_<8 hex>.md into `workdir`. The digest mixes a per-process
// nonce and counter, so repeated identical calls produce distinct names.
WrittenReport write_retrieval_report(std::string_view query, const std::vector<RetrievalHit>& hits,
                                     std::string_view synthesis, const std::filesystem::path& workdir);

}  // namespace esg::retrieval
