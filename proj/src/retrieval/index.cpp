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

#include "esg/retrieval/index.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"
#include "esg/common/text.hpp"
#include "esg/llm/gateway.hpp"

namespace esg::retrieval {

static_assert(std::endian::native == std::endian::little, "vectors.bin I/O assumes a little-endian host");

std::string_view to_string(RetrievalMode mode) {
  return mode == RetrievalMode::kHybrid ? "hybrid" : "vector";
}

RetrievalMode retrieval_mode_from_string(std::string_view s) {
  const auto t = text::to_lower(s);
  if (t == "vector") return RetrievalMode::kVector;
  if (t == "hybrid") return RetrievalMode::kHybrid;
  throw Error(ErrorKind::kArgValidation, "unknown retrieval mode '" + std::string(s) + "'");
}

std::string_view to_string(HitSource via) { return via == HitSource::kGraph ? "graph" : "vector"; }

std::string RetrievalHit::uri() const { return "doc://" + doc_id + "#" + std::to_string(ordinal); }

KnowledgeIndex::KnowledgeIndex(ChunkingOptions chunking) : chunking_(chunking) {
  if (chunking_.size == 0 || chunking_.overlap >= chunking_.size) {
    throw Error(ErrorKind::kInvalidChunking, "chunk overlap must be smaller than chunk size");
  }
}

const Chunk* KnowledgeIndex::find_chunk(std::string_view chunk_id) const {
  for (const auto& c : chunks_) {
    if (c.chunk_id == chunk_id) return &c;
  }
  return nullptr;
}

const Document* KnowledgeIndex::find_document(const std::string& doc_id) const {
  for (const auto& d : documents_) {
    if (d.doc_id == doc_id) return &d;
  }
  return nullptr;
}

bool KnowledgeIndex::add_document(Document document) {
  if (find_document(document.doc_id) != nullptr) return false;
  documents_.push_back(std::move(document));
  return true;
}

void KnowledgeIndex::append_chunk(Chunk c) {
  // Embeddings are held at float precision so a saved index reloads bit-exactly.
  for (auto& x : c.embedding) x = static_cast<double>(static_cast<float>(x));
  if (matrix_.dimension() == 0) matrix_ = EmbeddingMatrix(c.embedding.size());
  matrix_.append(c.embedding);
  chunks_.push_back(std::move(c));
}

void KnowledgeIndex::build(llm::Gateway& gateway) {
  for (; built_documents_ < documents_.size(); ++built_documents_) {
    auto pieces = chunk(documents_[built_documents_], chunking_.size, chunking_.overlap);
    std::vector<std::string> texts;
    texts.reserve(pieces.size());
    for (const auto& p : pieces) texts.push_back(p.text);
    auto vectors = gateway.embed(texts);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      pieces[i].embedding = std::move(vectors.at(i));
      append_chunk(std::move(pieces[i]));
    }
  }
}

GraphExtraction KnowledgeIndex::build_graph(llm::Gateway& gateway, const ExtractionOptions& options) {
  auto extraction = extract_graph(chunks_, gateway, options);
  auto nodes = resolve_entities(extraction.nodes);
  auto edges = canonicalize_relations(extraction.edges, nodes);
  set_graph(nodes, edges);
  extraction.nodes = nodes_;
  extraction.edges = edges_;
  return extraction;
}

void KnowledgeIndex::set_graph(std::vector<EntityNode> nodes, std::vector<RelationEdge> edges) {
  nodes_ = std::move(nodes);
  edges_ = std::move(edges);
}

RetrievalHit KnowledgeIndex::make_hit(std::size_t chunk_index, double score, double cosine,
                                      HitSource via) const {
  const auto& c = chunks_[chunk_index];
  RetrievalHit h;
  h.chunk_id = c.chunk_id;
  h.doc_id = c.doc_id;
  h.ordinal = c.ordinal;
  h.score = score;
  h.cosine = cosine;
  h.via = via;
  std::string flat;
  for (const auto& w : text::split_whitespace(c.text)) {
    if (!flat.empty()) flat += ' ';
    flat += w;
  }
  h.snippet = text::truncate(flat, 300);
  const auto* doc = find_document(c.doc_id);
  h.title = doc ? doc->title : c.doc_id;
  return h;
}

std::vector<RetrievalHit> KnowledgeIndex::search(std::string_view query, const llm::Embedding& query_embedding,
                                                 std::size_t top_k, RetrievalMode mode) const {
  if (chunks_.empty()) throw Error(ErrorKind::kEmptyIndex, "the knowledge index holds no chunks");
  if (top_k == 0) throw Error(ErrorKind::kArgValidation, "top_k must be at least 1");
  std::vector<double> scores(chunks_.size());
  cosine_scan(query_embedding, matrix_, scores);
  std::vector<std::size_t> order(chunks_.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const std::size_t k = std::min(top_k, chunks_.size());
  std::vector<RetrievalHit> hits;
  hits.push_back(make_hit(order[0], scores[order[0]], scores[order[0]], HitSource::kVector));
  std::set<std::size_t> taken = {order[0]};

  if (mode == RetrievalMode::kHybrid) {
    std::map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < chunks_.size(); ++i) index_of[chunks_[i].chunk_id] = i;
    std::set<std::string> matched;
    std::set<std::string> reachable;
    for (const auto& node : nodes_) {
      const bool hit = std::any_of(node.aliases.begin(), node.aliases.end(), [&](const std::string& a) {
        return text::codepoint_length(a) >= 3 && text::icontains(query, a);
      });
      if (!hit) continue;
      matched.insert(node.canonical_name);
      reachable.insert(node.mention_chunk_ids.begin(), node.mention_chunk_ids.end());
    }
    for (const auto& e : edges_) {
      if (matched.count(e.src) || matched.count(e.dst)) {
        reachable.insert(e.evidence_chunk_ids.begin(), e.evidence_chunk_ids.end());
      }
    }
    std::vector<std::size_t> graph_chunks;
    for (const auto& id : reachable) {
      const auto it = index_of.find(id);
      if (it != index_of.end() && !taken.count(it->second)) graph_chunks.push_back(it->second);
    }
    std::stable_sort(graph_chunks.begin(), graph_chunks.end(), [&](std::size_t a, std::size_t b) {
      return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
    });
    const double head = hits.front().score;
    for (auto i : graph_chunks) {
      if (hits.size() >= k) break;
      hits.push_back(make_hit(i, head, scores[i], HitSource::kGraph));
      taken.insert(i);
    }
  }
  for (std::size_t r = 1; r < order.size() && hits.size() < k; ++r) {
    if (taken.count(order[r])) continue;
    hits.push_back(make_hit(order[r], scores[order[r]], scores[order[r]], HitSource::kVector));
    taken.insert(order[r]);
  }
  return hits;
}

RetrievalReport KnowledgeIndex::retrieve(std::string_view query, std::size_t top_k, RetrievalMode mode,
                                         llm::Gateway& gateway, const std::filesystem::path& workdir) const {
  if (chunks_.empty()) throw Error(ErrorKind::kEmptyIndex, "the knowledge index holds no chunks");
  const auto embedding = gateway.embed({std::string(query)}).at(0);
  RetrievalReport report;
  report.query = std::string(query);
  report.hits = search(query, embedding, top_k, mode);
  report.synthesized_markdown = extractive_synthesis(query, report.hits);
  auto written = write_retrieval_report(query, report.hits, report.synthesized_markdown, workdir);
  report.saved_path = written.path;
  return report;
}

namespace {

Json metadata_json(const DocumentMetadata& m) {
  Json j = Json::object();
  j["company"] = m.company ? Json(*m.company) : Json(nullptr);
  j["year"] = m.year ? Json(*m.year) : Json(nullptr);
  j["kind"] = m.kind ? Json(*m.kind) : Json(nullptr);
  return j;
}

DocumentMetadata metadata_from(const Json& j) {
  DocumentMetadata m;
  if (!j.is_object()) return m;
  if (j.contains("company") && j["company"].is_string()) m.company = j["company"].get<std::string>();
  if (j.contains("year") && j["year"].is_number_integer()) m.year = j["year"].get<int>();
  if (j.contains("kind") && j["kind"].is_string()) m.kind = j["kind"].get<std::string>();
  return m;
}

std::vector<Json> read_jsonl(const fs::path& path) {
  std::vector<Json> out;
  if (!fs::exists(path)) return out;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(read_file(path))) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(Json::parse(line));
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::kIoError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

void KnowledgeIndex::save(const std::filesystem::path& dir) const {
  fs::create_directories(dir);
  std::string docs;
  for (const auto& d : documents_) {
    docs += dump_line({{"doc_id", d.doc_id},
                       {"source_path", d.source_path.string()},
                       {"title", d.title},
                       {"body", d.body},
                       {"metadata", metadata_json(d.metadata)}}) +
            "\n";
  }
  write_file(dir / "documents.jsonl", docs);

  std::string chunks;
  for (const auto& c : chunks_) {
    chunks += dump_line({{"chunk_id", c.chunk_id}, {"doc_id", c.doc_id}, {"ordinal", c.ordinal}, {"text", c.text}}) +
              "\n";
  }
  write_file(dir / "chunks.jsonl", chunks);

  std::string bin;
  const auto dim = static_cast<std::uint32_t>(matrix_.dimension());
  bin.append(reinterpret_cast<const char*>(&dim), sizeof dim);
  for (std::size_t r = 0; r < matrix_.rows(); ++r) {
    for (double x : matrix_.row(r)) {
      const float f = static_cast<float>(x);
      bin.append(reinterpret_cast<const char*>(&f), sizeof f);
    }
  }
  write_file(dir / "vectors.bin", bin);

  std::string graph;
  for (const auto& n : nodes_) {
    graph += dump_line({{"kind", "entity"},
                        {"canonical_name", n.canonical_name},
                        {"aliases", n.aliases},
                        {"entity_type", to_string(n.entity_type)},
                        {"mention_chunk_ids", n.mention_chunk_ids}}) +
             "\n";
  }
  for (const auto& e : edges_) {
    graph += dump_line({{"kind", "relation"},
                        {"src", e.src},
                        {"dst", e.dst},
                        {"label", e.label},
                        {"evidence_chunk_ids", e.evidence_chunk_ids}}) +
             "\n";
  }
  write_file(dir / "graph.jsonl", graph);
}

KnowledgeIndex KnowledgeIndex::load(const std::filesystem::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kIoError, "no index directory at " + dir.string());
  KnowledgeIndex index;
  try {
    for (const auto& j : read_jsonl(dir / "documents.jsonl")) {
      Document d;
      d.doc_id = j.at("doc_id").get<std::string>();
      d.source_path = j.value("source_path", std::string());
      d.title = j.value("title", std::string());
      d.body = j.at("body").get<std::string>();
      d.metadata = metadata_from(j.value("metadata", Json::object()));
      index.documents_.push_back(std::move(d));
    }
    index.built_documents_ = index.documents_.size();

    const auto chunk_rows = read_jsonl(dir / "chunks.jsonl");
    std::string bin = fs::exists(dir / "vectors.bin") ? read_file(dir / "vectors.bin") : std::string();
    std::uint32_t dim = 0;
    if (bin.size() >= sizeof dim) std::memcpy(&dim, bin.data(), sizeof dim);
    const std::size_t expected = sizeof dim + chunk_rows.size() * dim * sizeof(float);
    if (!chunk_rows.empty() && (dim == 0 || bin.size() != expected)) {
      throw Error(ErrorKind::kIoError, "vectors.bin does not match chunks.jsonl in " + dir.string());
    }
    const char* cursor = bin.data() + sizeof dim;
    for (const auto& j : chunk_rows) {
      Chunk c;
      c.chunk_id = j.at("chunk_id").get<std::string>();
      c.doc_id = j.at("doc_id").get<std::string>();
      c.ordinal = j.at("ordinal").get<std::size_t>();
      c.text = j.at("text").get<std::string>();
      c.embedding.resize(dim);
      for (std::uint32_t k = 0; k < dim; ++k) {
        float f;
        std::memcpy(&f, cursor, sizeof f);
        cursor += sizeof f;
        c.embedding[k] = f;
      }
      index.append_chunk(std::move(c));
    }

    for (const auto& j : read_jsonl(dir / "graph.jsonl")) {
      const auto kind = j.value("kind", std::string());
      if (kind == "entity") {
        EntityNode n;
        n.canonical_name = j.at("canonical_name").get<std::string>();
        n.aliases = j.at("aliases").get<std::set<std::string>>();
        n.entity_type = entity_type_from_string(j.value("entity_type", std::string("other")));
        n.mention_chunk_ids = j.at("mention_chunk_ids").get<std::set<std::string>>();
        index.nodes_.push_back(std::move(n));
      } else if (kind == "relation") {
        RelationEdge e;
        e.src = j.at("src").get<std::string>();
        e.dst = j.at("dst").get<std::string>();
        e.label = j.value("label", std::string());
        e.evidence_chunk_ids = j.at("evidence_chunk_ids").get<std::set<std::string>>();
        index.edges_.push_back(std::move(e));
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kIoError, "corrupt index in " + dir.string() + ": " + e.what());
  }
  return index;
}

namespace {

std::string first_sentence(std::string_view s, std::size_t max_codepoints) {
  std::size_t end = s.size();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if ((s[i] == '.' || s[i] == '!' || s[i] == '?') && s[i + 1] == ' ') {
      end = i + 1;
      break;
    }
  }
  return text::truncate(s.substr(0, end), max_codepoints);
}

}  // namespace

std::string extractive_synthesis(std::string_view query, const std::vector<RetrievalHit>& hits) {
  if (hits.empty()) return "No indexed passage matched the query \"" + std::string(query) + "\".";
  std::ostringstream out;
  out << "The passages most relevant to \"" << query << "\" come from " << hits.front().title << ".\n\n";
  for (std::size_t i = 0; i < hits.size(); ++i) {
    out << "- " << first_sentence(hits[i].snippet, 200) << " [" << (i + 1) << "](" << hits[i].uri() << ")\n";
  }
  return out.str();
}

WrittenReport write_retrieval_report(std::string_view query, const std::vector<RetrievalHit>& hits,
                                     std::string_view synthesis, const std::filesystem::path& workdir) {
  static const std::string nonce = random_hex(8);
  static std::atomic<std::uint64_t> counter{0};
  std::string seed = nonce + ":" + std::to_string(counter.fetch_add(1)) + ":" + std::string(query);
  for (const auto& h : hits) seed += ":" + h.chunk_id;
  const auto name = "retrieval_" + sha256_hex(seed).substr(0, 8) + ".md";

  std::ostringstream md;
  md << "# Retrieval Report\n\n";
  md << "Retrieved " << hits.size() << " documents for query: " << query << "\n\n";
  md << "## 1. Retrieved Evidence\n\n";
  for (std::size_t i = 0; i < hits.size(); ++i) {
    const auto& h = hits[i];
    char score[32];
    std::snprintf(score, sizeof score, "%.4f", h.score);
    md << "### [" << (i + 1) << "] " << h.title << "\n\n";
    md << "doc_id: " << h.doc_id << ", chunk: " << h.ordinal << ", score: " << score
       << ", via: " << to_string(h.via) << "\n\n";
    md << "> " << h.snippet << "\n\n";
  }
  md << "## 2. Synthesis\n\n" << synthesis << "\n\n";
  md << "## References\n\n";
  for (std::size_t i = 0; i < hits.size(); ++i) {
    md << "[" << (i + 1) << "](" << hits[i].uri() << ") " << hits[i].title << "\n\n";
  }
  WrittenReport out{workdir / name, md.str()};
  try {
    write_file(out.path, out.markdown);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kIoError, "cannot write " + out.path.string() + ": " + e.what());
  }
  return out;
}

}  // namespace esg::retrieval
