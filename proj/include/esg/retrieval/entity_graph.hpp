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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "esg/retrieval/document.hpp"

namespace esg::llm {
class Gateway;
}

namespace esg::retrieval {

enum class EntityType { kOrg, kMetric, kStandard, kLocation, kOther };

std::string_view to_string(EntityType type);
EntityType entity_type_from_string(std::string_view s);

struct EntityNode {
  std::string canonical_name;
  std::set<std::string> aliases;
  EntityType entity_type = EntityType::kOther;
  std::set<std::string> mention_chunk_ids;
};

struct RelationEdge {
  std::string src;
  std::string dst;
  std::string label;
  std::set<std::string> evidence_chunk_ids;
};

// Case-folds, replaces punctuation with spaces and drops trailing corporate
// suffixes (inc, corp, co, ltd, plc). "Apple, Inc." and "apple" both give "apple".
std::string normalize_entity_name(std::string_view name);

// Merges nodes that share any alias up to normalization. The merged canonical name is the
// longest alias (ties broken lexicographically); aliases and mentions are
// unioned. Output preserves first-appearance order, so the operation is
// idempotent.
std::vector<EntityNode> resolve_entities(std::vector<EntityNode> nodes);

// Rewrites edge endpoints onto the canonical names of `nodes`, dropping edges
// whose endpoints are unknown or collapse onto the same entity, and merging
// duplicates.
std::vector<RelationEdge> canonicalize_relations(const std::vector<RelationEdge>& edges,
                                                 const std::vector<EntityNode>& nodes);

struct ExtractionOptions {
  std::string role = "extractor";
  std::size_t batch_size = 4;
};

struct GraphExtraction {
  std::vector<EntityNode> nodes;
  std::vector<RelationEdge> edges;
  std::size_t skipped_chunks = 0;  // chunks in batches whose reply did not parse
};

// One LLM call per batch, each asking for a JSON block
// {"entities":[{"name","type","chunk_ids"?}], "relations":[{"src","dst","label"}]}.
// Nodes are returned unresolved.
GraphExtraction extract_graph(const std::vector<Chunk>& chunks, llm::Gateway& gateway,
                              const ExtractionOptions& options = {});

}  // namespace esg::retrieval
