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

#include "esg/retrieval/entity_graph.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "esg/common/error.hpp"
#include "esg/common/fenced.hpp"
#include "esg/common/text.hpp"
#include "esg/llm/gateway.hpp"

namespace esg::retrieval {

std::string_view to_string(EntityType type) {
  switch (type) {
    case EntityType::kOrg: return "org";
    case EntityType::kMetric: return "metric";
    case EntityType::kStandard: return "standard";
    case EntityType::kLocation: return "location";
    case EntityType::kOther: return "other";
  }
  return "other";
}

EntityType entity_type_from_string(std::string_view s) {
  const auto t = text::to_lower(s);
  if (t == "org" || t == "organization" || t == "company") return EntityType::kOrg;
  if (t == "metric") return EntityType::kMetric;
  if (t == "standard" || t == "framework") return EntityType::kStandard;
  if (t == "location" || t == "place") return EntityType::kLocation;
  return EntityType::kOther;
}

std::string normalize_entity_name(std::string_view name) {
  static const std::set<std::string> kSuffixes = {"inc", "corp", "co", "ltd", "plc"};
  std::string folded;
  folded.reserve(name.size());
  for (unsigned char c : name) {
    folded += std::ispunct(c) ? ' ' : static_cast<char>(std::tolower(c));
  }
  auto tokens = text::split_whitespace(folded);
  while (tokens.size() > 1 && kSuffixes.count(tokens.back()) != 0) tokens.pop_back();
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

namespace {

bool longer_alias(const std::string& a, const std::string& b) {
  const auto la = text::codepoint_length(a);
  const auto lb = text::codepoint_length(b);
  if (la != lb) return la > lb;
  return a < b;
}

}  // namespace

std::vector<EntityNode> resolve_entities(std::vector<EntityNode> nodes) {
  // Union-find over nodes sharing any normalized alias.
  std::vector<std::size_t> parent(nodes.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].aliases.insert(nodes[i].canonical_name);
    for (const auto& alias : nodes[i].aliases) {
      auto [it, inserted] = owner.emplace(normalize_entity_name(alias), i);
      if (!inserted) {
        const auto a = find(it->second);
        const auto b = find(i);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<EntityNode> merged;
  std::map<std::size_t, std::size_t> slot_of;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [it, inserted] = slot_of.emplace(find(i), merged.size());
    if (inserted) {
      merged.push_back(std::move(nodes[i]));
      continue;
    }
    auto& target = merged[it->second];
    if (target.entity_type == EntityType::kOther) target.entity_type = nodes[i].entity_type;
    target.aliases.insert(nodes[i].aliases.begin(), nodes[i].aliases.end());
    target.mention_chunk_ids.insert(nodes[i].mention_chunk_ids.begin(), nodes[i].mention_chunk_ids.end());
  }
  for (auto& node : merged) {
    node.canonical_name = *std::min_element(node.aliases.begin(), node.aliases.end(), longer_alias);
  }
  return merged;
}

std::vector<RelationEdge> canonicalize_relations(const std::vector<RelationEdge>& edges,
                                                 const std::vector<EntityNode>& nodes) {
  std::map<std::string, std::string> canonical_of;
  for (const auto& n : nodes) {
    canonical_of[normalize_entity_name(n.canonical_name)] = n.canonical_name;
    for (const auto& a : n.aliases) canonical_of.emplace(normalize_entity_name(a), n.canonical_name);
  }
  std::vector<RelationEdge> out;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t> slot_of;
  for (const auto& e : edges) {
    const auto s = canonical_of.find(normalize_entity_name(e.src));
    const auto d = canonical_of.find(normalize_entity_name(e.dst));
    if (s == canonical_of.end() || d == canonical_of.end() || s->second == d->second) continue;
    auto key = std::make_tuple(s->second, d->second, e.label);
    auto [it, inserted] = slot_of.emplace(key, out.size());
    if (inserted) {
      out.push_back({s->second, d->second, e.label, e.evidence_chunk_ids});
    } else {
      out[it->second].evidence_chunk_ids.insert(e.evidence_chunk_ids.begin(), e.evidence_chunk_ids.end());
    }
  }
  return out;
}

namespace {

constexpr const char* kExtractionPrompt =
    "You extract an ESG knowledge graph from document chunks. Identify organizations, "
    "metrics, reporting standards, locations and other salient entities, plus relations "
    "between them. Reply with one fenced ```json block of the form\n"
    "{\"entities\": [{\"name\": str, \"type\": \"org|metric|standard|location|other\", "
    "\"chunk_ids\": [str]}], \"relations\": [{\"src\": str, \"dst\": str, \"label\": str}]}";

std::set<std::string> chunks_mentioning(const std::vector<const Chunk*>& batch,
                                        const std::vector<std::string>& names) {
  std::set<std::string> ids;
  for (const auto* c : batch) {
    const bool all = std::all_of(names.begin(), names.end(),
                                 [&](const std::string& n) { return text::icontains(c->text, n); });
    if (all) ids.insert(c->chunk_id);
  }
  if (ids.empty()) {
    for (const auto* c : batch) ids.insert(c->chunk_id);
  }
  return ids;
}

bool parse_batch(const Json& j, const std::vector<const Chunk*>& batch, GraphExtraction& out) {
  if (!j.is_object() || !j.contains("entities") || !j["entities"].is_array()) return false;
  std::set<std::string> batch_ids;
  for (const auto* c : batch) batch_ids.insert(c->chunk_id);
  std::vector<EntityNode> nodes;
  std::set<std::string> names;
  for (const auto& e : j["entities"]) {
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string()) return false;
    EntityNode n;
    n.canonical_name = text::trim(e["name"].get<std::string>());
    if (n.canonical_name.empty()) return false;
    n.aliases = {n.canonical_name};
    n.entity_type = entity_type_from_string(e.value("type", std::string("other")));
    if (e.contains("chunk_ids") && e["chunk_ids"].is_array()) {
      for (const auto& id : e["chunk_ids"]) {
        if (id.is_string() && batch_ids.count(id.get<std::string>())) n.mention_chunk_ids.insert(id.get<std::string>());
      }
    }
    if (n.mention_chunk_ids.empty()) n.mention_chunk_ids = chunks_mentioning(batch, {n.canonical_name});
    names.insert(n.canonical_name);
    nodes.push_back(std::move(n));
  }
  std::vector<RelationEdge> edges;
  if (j.contains("relations")) {
    if (!j["relations"].is_array()) return false;
    for (const auto& r : j["relations"]) {
      if (!r.is_object() || !r.contains("src") || !r.contains("dst") || !r["src"].is_string() ||
          !r["dst"].is_string()) {
        return false;
      }
      RelationEdge e;
      e.src = text::trim(r["src"].get<std::string>());
      e.dst = text::trim(r["dst"].get<std::string>());
      e.label = r.value("label", std::string("related_to"));
      if (e.src == e.dst || !names.count(e.src) || !names.count(e.dst)) continue;
      e.evidence_chunk_ids = chunks_mentioning(batch, {e.src, e.dst});
      edges.push_back(std::move(e));
    }
  }
  out.nodes.insert(out.nodes.end(), nodes.begin(), nodes.end());
  out.edges.insert(out.edges.end(), edges.begin(), edges.end());
  return true;
}

}  // namespace

GraphExtraction extract_graph(const std::vector<Chunk>& chunks, llm::Gateway& gateway,
                              const ExtractionOptions& options) {
  GraphExtraction out;
  const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
  for (std::size_t begin = 0; begin < chunks.size(); begin += batch_size) {
    std::vector<const Chunk*> batch;
    std::ostringstream prompt;
    for (std::size_t i = begin; i < std::min(chunks.size(), begin + batch_size); ++i) {
      batch.push_back(&chunks[i]);
      prompt << "[chunk " << chunks[i].chunk_id << "]\n" << chunks[i].text << "\n\n";
    }
    llm::ChatRequest req;
    req.model_role = options.role;
    req.temperature = 0.0;
    req.messages = {llm::ChatMessage::system(kExtractionPrompt), llm::ChatMessage::user(prompt.str())};
    const auto reply = gateway.complete(req);
    const auto j = find_json(reply.content, "json");
    if (!j || !parse_batch(*j, batch, out)) out.skipped_chunks += batch.size();
  }
  return out;
}

}  // namespace esg::retrieval
