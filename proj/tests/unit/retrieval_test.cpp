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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <regex>

#include <gtest/gtest.h>

#include "esg/common/text.hpp"
#include "esg/retrieval/index.hpp"
#include "test_support.hpp"

namespace esg::retrieval {
namespace {

using esg::testing::kind_of;
using esg::testing::replay_gateway;
using esg::testing::say;
using esg::testing::TempDir;

Document make_doc(const std::string& body, const std::string& title = "doc") {
  Document d;
  d.doc_id = sha256_hex(body).substr(0, 16);
  d.title = title;
  d.body = body;
  return d;
}

// Independent reference: plain cosine over every chunk, sorted by score then chunk order.
std::vector<std::pair<std::string, double>> brute_force(const KnowledgeIndex& index, const llm::Embedding& q) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& c : index.chunks()) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      dot += q[i] * c.embedding[i];
      na += q[i] * q[i];
      nb += c.embedding[i] * c.embedding[i];
    }
    out.emplace_back(c.chunk_id, (na == 0 || nb == 0) ? 0.0 : dot / std::sqrt(na * nb));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

TEST(IngestTest, BodyEqualsFileContents) {
  TempDir dir;
  std::string body = "# Sustainability Report\n\n";
  while (body.size() < 2048) body += "Scope 1 emissions fell while renewable share rose. ";
  write_file(dir / "report.md", body);
  const auto d = ingest(dir / "report.md", {});
  EXPECT_EQ(d.body, body);
  EXPECT_EQ(d.title, "Sustainability Report");
  EXPECT_EQ(d.doc_id.size(), 16u);
  EXPECT_EQ(d.doc_id, ingest(dir / "report.md", {}).doc_id);
}

TEST(IngestTest, EmptyAndUnsupported) {
  TempDir dir;
  write_file(dir / "empty.txt", "");
  write_file(dir / "talk.mp3", "ID3");
  EXPECT_EQ(kind_of([&] { ingest(dir / "empty.txt", {}); }), ErrorKind::kEmptyDocument);
  EXPECT_EQ(kind_of([&] { ingest(dir / "talk.mp3", {}); }), ErrorKind::kUnsupportedFormat);
  EXPECT_EQ(kind_of([&] { ingest(dir / "missing.md", {}); }), ErrorKind::kIoError);
}

TEST(IngestTest, PluggableExtractor) {
  TempDir dir;
  write_file(dir / "scan.pdf", "%PDF");
  auto reg = ExtractorRegistry::with_builtins();
  reg.register_extractor(".pdf", [](const std::filesystem::path&) { return std::string("extracted text"); });
  EXPECT_EQ(ingest(dir / "scan.pdf", {}, reg).body, "extracted text");
}

TEST(ChunkTest, Examples) {
  EXPECT_EQ(chunk(make_doc(std::string(10, 'a')), 10, 0).size(), 1u);
  const auto three = chunk(make_doc(std::string(25, 'a')), 10, 0);
  ASSERT_EQ(three.size(), static_cast<std::size_t>(std::ceil(25.0 / 10.0)));
  for (std::size_t i = 0; i < three.size(); ++i) EXPECT_EQ(three[i].ordinal, i);
  EXPECT_EQ(kind_of([] { chunk(make_doc("abcdef"), 5, 5); }), ErrorKind::kInvalidChunking);
}

TEST(ChunkTest, ReconstructionProperty) {
  std::mt19937 rng(7);
  const std::string alphabet = "abc de\xc3\xa9\xe2\x82\xac\n.";
  for (int trial = 0; trial < 200; ++trial) {
    std::string body;
    const int n = 1 + static_cast<int>(rng() % 300);
    for (int i = 0; i < n; ++i) {
      const auto pick = rng() % 10;
      if (pick == 7) body += "\xc3\xa9";
      else if (pick == 8) body += "\xe2\x82\xac";
      else body += alphabet[pick % 6];
    }
    const auto doc = make_doc(body);
    const std::size_t size = 1 + rng() % 40;
    const std::size_t overlap = rng() % size;
    const auto chunks = chunk(doc, size, overlap);
    std::string concat;
    for (const auto& c : chunks) {
      EXPECT_LE(text::codepoint_length(c.text), size + overlap);
      if (overlap == 0) concat += c.text;
    }
    if (overlap == 0) {
      EXPECT_EQ(concat, body);
    }
    EXPECT_EQ(reconstruct(chunks, overlap), body) << "size " << size << " overlap " << overlap;
  }
}

TEST(EntityTest, ResolveExamples) {
  std::vector<EntityNode> nodes = {{"Apple", {"Apple"}, EntityType::kOrg, {"a#0"}},
                                   {"apple inc.", {"apple inc."}, EntityType::kOrg, {"b#0"}}};
  const auto merged = resolve_entities(nodes);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0].canonical_name, "apple inc.");
  EXPECT_EQ(merged[0].aliases, (std::set<std::string>{"Apple", "apple inc."}));
  EXPECT_EQ(merged[0].mention_chunk_ids, (std::set<std::string>{"a#0", "b#0"}));

  std::vector<EntityNode> distinct = {{"Apple", {"Apple"}, EntityType::kOrg, {"a#0"}},
                                      {"Boeing", {"Boeing"}, EntityType::kOrg, {"a#0"}}};
  const auto kept = resolve_entities(distinct);
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].canonical_name, "Apple");
  EXPECT_EQ(kept[1].canonical_name, "Boeing");
  EXPECT_TRUE(resolve_entities({}).empty());
}

TEST(EntityTest, NormalizationHandWorked) {
  EXPECT_EQ(normalize_entity_name("Apple, Inc."), "apple");
  EXPECT_EQ(normalize_entity_name("ACME Corp"), "acme");
  EXPECT_EQ(normalize_entity_name("Tesco PLC"), "tesco");
  EXPECT_EQ(normalize_entity_name("Co"), "co");
  EXPECT_EQ(normalize_entity_name("Scope 1 Emissions"), "scope 1 emissions");
}

TEST(EntityTest, ResolutionIdempotent) {
  std::mt19937 rng(11);
  const std::vector<std::string> names = {"Apple", "apple inc.", "APPLE", "Boeing", "Boeing Co.", "GRI",
                                          "G.R.I.", "Scope 1", "scope-1", "Tesco plc", "Tesco"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EntityNode> nodes;
    const int n = static_cast<int>(rng() % 12);
    for (int i = 0; i < n; ++i) {
      const auto& name = names[rng() % names.size()];
      nodes.push_back({name, {name}, static_cast<EntityType>(rng() % 5), {"c#" + std::to_string(rng() % 4)}});
    }
    const auto once = resolve_entities(nodes);
    const auto twice = resolve_entities(once);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
      EXPECT_EQ(once[i].canonical_name, twice[i].canonical_name);
      EXPECT_EQ(once[i].aliases, twice[i].aliases);
      EXPECT_EQ(once[i].mention_chunk_ids, twice[i].mention_chunk_ids);
      EXPECT_EQ(once[i].entity_type, twice[i].entity_type);
      EXPECT_TRUE(once[i].aliases.count(once[i].canonical_name));
      EXPECT_FALSE(once[i].mention_chunk_ids.empty());
    }
  }
}

TEST(ExtractGraphTest, ScriptedPassthrough) {
  KnowledgeIndex index({100, 0});
  index.add_document(make_doc("Apple reported Scope 1 emissions"));
  auto g = replay_gateway({say("```json\n{\"entities\":[{\"name\":\"Apple\",\"type\":\"org\"},"
                               "{\"name\":\"Scope 1 emissions\",\"type\":\"metric\"}],"
                               "\"relations\":[{\"src\":\"Apple\",\"dst\":\"Scope 1 emissions\",\"label\":\"reports\"}]}\n```")},
                          {"extractor"});
  index.build(*g);
  const auto out = extract_graph(index.chunks(), *g);
  ASSERT_EQ(out.nodes.size(), 2u);
  ASSERT_EQ(out.edges.size(), 1u);
  EXPECT_EQ(out.nodes[0].entity_type, EntityType::kOrg);
  EXPECT_EQ(out.nodes[1].entity_type, EntityType::kMetric);
  EXPECT_EQ(out.edges[0].label, "reports");
  EXPECT_EQ(out.edges[0].evidence_chunk_ids, (std::set<std::string>{index.chunks()[0].chunk_id}));
  for (const auto& n : out.nodes) EXPECT_FALSE(n.mention_chunk_ids.empty());
  EXPECT_EQ(out.skipped_chunks, 0u);
}

TEST(ExtractGraphTest, EmptyInputMakesNoCall) {
  auto g = replay_gateway({}, {"extractor"});
  const auto out = extract_graph({}, *g);
  EXPECT_TRUE(out.nodes.empty());
  EXPECT_TRUE(out.edges.empty());
  EXPECT_EQ(g->call_count(), 0u);
}

TEST(ExtractGraphTest, AliasPairResolvesToOneNode) {
  KnowledgeIndex index({100, 0});
  index.add_document(make_doc("Apple cut water use."));
  index.add_document(make_doc("Apple Inc. issued a green bond."));
  auto g = replay_gateway({say("```json\n{\"entities\":[{\"name\":\"Apple\",\"type\":\"org\"}]}\n```"),
                           say("```json\n{\"entities\":[{\"name\":\"Apple Inc.\",\"type\":\"org\"}]}\n```")},
                          {"extractor"});
  index.build(*g);
  const auto stats = index.build_graph(*g, {"extractor", 1});
  ASSERT_EQ(index.nodes().size(), 1u);
  EXPECT_EQ(index.nodes()[0].aliases, (std::set<std::string>{"Apple", "Apple Inc."}));
  EXPECT_EQ(index.nodes()[0].canonical_name, "Apple Inc.");
  EXPECT_EQ(index.nodes()[0].mention_chunk_ids.size(), 2u);
  EXPECT_EQ(stats.skipped_chunks, 0u);
}

TEST(ExtractGraphTest, MalformedBatchIsCountedNotFatal) {
  KnowledgeIndex index({100, 0});
  index.add_document(make_doc("first chunk about GRI"));
  index.add_document(make_doc("second chunk about SASB"));
  auto g = replay_gateway({say("I cannot comply"),
                           say("```json\n{\"entities\":[{\"name\":\"SASB\",\"type\":\"standard\"}]}\n```")},
                          {"extractor"});
  index.build(*g);
  const auto out = extract_graph(index.chunks(), *g, {"extractor", 1});
  EXPECT_EQ(out.skipped_chunks, 1u);
  ASSERT_EQ(out.nodes.size(), 1u);
  EXPECT_EQ(out.nodes[0].canonical_name, "SASB");
}

class RetrieveTest : public ::testing::Test {
 protected:
  void SetUp() override {
    gateway_ = replay_gateway({});
    index_.add_document(make_doc("Scope 2 market-based emissions for the fiscal year were flat.", "Alpha"));
    index_.add_document(make_doc("Water withdrawal intensity ZXQ-77 declined in arid regions.", "Beta"));
    index_.add_document(make_doc("Board diversity targets and executive pay linkages.", "Gamma"));
    index_.build(*gateway_);
  }
  std::unique_ptr<llm::Gateway> gateway_;
  KnowledgeIndex index_{{1200, 200}};
  TempDir work_;
};

TEST_F(RetrieveTest, MarkerDocumentRanksFirstAndMatchesOracle) {
  const auto report = index_.retrieve("ZXQ-77", 5, RetrievalMode::kVector, *gateway_, work_.path());
  ASSERT_EQ(report.hits.size(), 3u);
  EXPECT_EQ(report.hits[0].title, "Beta");
  const auto oracle = brute_force(index_, gateway_->embed({"ZXQ-77"})[0]);
  for (std::size_t i = 0; i < report.hits.size(); ++i) {
    EXPECT_EQ(report.hits[i].chunk_id, oracle[i].first);
    EXPECT_NEAR(report.hits[i].score, oracle[i].second, 1e-12);
    EXPECT_EQ(report.hits[i].via, HitSource::kVector);
  }
}

TEST_F(RetrieveTest, ReportFileShape) {
  const auto report = index_.retrieve("water intensity", 5, RetrievalMode::kVector, *gateway_, work_.path());
  ASSERT_TRUE(fs::exists(report.saved_path));
  EXPECT_TRUE(std::regex_match(report.saved_path.filename().string(), std::regex(R"(retrieval_[0-9a-f]{8}\.md)")));
  const auto md = read_file(report.saved_path);
  EXPECT_NE(md.find("Retrieved 3 documents for query: water intensity"), std::string::npos);
  EXPECT_NE(md.find("## References"), std::string::npos);
  EXPECT_NE(md.find(report.hits[0].doc_id), std::string::npos);
  EXPECT_NE(md.find("[1](doc://"), std::string::npos);
}

TEST_F(RetrieveTest, DeterministicAcrossRuns) {
  const auto a = index_.retrieve("board pay", 2, RetrievalMode::kVector, *gateway_, work_.path());
  const auto b = index_.retrieve("board pay", 2, RetrievalMode::kVector, *gateway_, work_.path());
  ASSERT_EQ(a.hits.size(), 2u);
  ASSERT_EQ(a.hits.size(), b.hits.size());
  for (std::size_t i = 0; i < a.hits.size(); ++i) {
    EXPECT_EQ(a.hits[i].chunk_id, b.hits[i].chunk_id);
    EXPECT_EQ(a.hits[i].score, b.hits[i].score);
  }
  EXPECT_NE(a.saved_path, b.saved_path);
}

TEST_F(RetrieveTest, EmptyIndexAndBadTopK) {
  KnowledgeIndex empty;
  EXPECT_EQ(kind_of([&] { empty.retrieve("q", 5, RetrievalMode::kVector, *gateway_, work_.path()); }),
            ErrorKind::kEmptyIndex);
  EXPECT_EQ(kind_of([&] { index_.retrieve("q", 0, RetrievalMode::kVector, *gateway_, work_.path()); }),
            ErrorKind::kArgValidation);
}

TEST_F(RetrieveTest, HybridPullsGraphChunksAfterTopHit) {
  const auto& chunks = index_.chunks();
  index_.set_graph({{"Board", {"Board"}, EntityType::kOther, {chunks[2].chunk_id}},
                    {"Scope 2", {"Scope 2"}, EntityType::kMetric, {chunks[0].chunk_id}}},
                   {});
  const auto vec = index_.retrieve("ZXQ-77 board", 2, RetrievalMode::kVector, *gateway_, work_.path());
  const auto hyb = index_.retrieve("ZXQ-77 board", 2, RetrievalMode::kHybrid, *gateway_, work_.path());
  ASSERT_EQ(hyb.hits.size(), 2u);
  EXPECT_EQ(hyb.hits[0].chunk_id, vec.hits[0].chunk_id);
  EXPECT_EQ(hyb.hits[1].chunk_id, chunks[2].chunk_id);
  EXPECT_EQ(hyb.hits[1].via, HitSource::kGraph);
  EXPECT_LE(hyb.hits[1].score, hyb.hits[0].score);
}

TEST(WriteReportTest, ZeroHitsAndDistinctNames) {
  TempDir dir;
  const auto a = write_retrieval_report("q", {}, "none", dir.path());
  const auto b = write_retrieval_report("q", {}, "none", dir.path());
  EXPECT_NE(a.path, b.path);
  EXPECT_NE(read_file(a.path).find("Retrieved 0 documents"), std::string::npos);
  EXPECT_NE(a.markdown.find("## References"), std::string::npos);
}

TEST(SimilarityTest, ParallelMatchesSerialBitwise) {
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  EmbeddingMatrix m(64);
  for (int r = 0; r < 997; ++r) {
    std::vector<double> row(64);
    for (auto& x : row) x = (r % 50 == 0) ? 0.0 : dist(rng);
    m.append(row);
  }
  std::vector<double> q(64);
  for (auto& x : q) x = dist(rng);
  std::vector<double> par(m.rows()), ser(m.rows());
  cosine_scan(q, m, par);
  cosine_scan_serial(q, m, ser);
  EXPECT_EQ(par, ser);
  EXPECT_EQ(par[0], 0.0);
}

TEST(RankSoundnessTest, RandomCorporaMatchBruteForce) {
  std::mt19937 rng(5);
  const std::vector<std::string> words = {"scope", "emissions", "water", "board", "diversity", "carbon",
                                          "intensity", "renewable", "waste", "safety", "pay", "tcfd"};
  auto gateway = replay_gateway({});
  for (int trial = 0; trial < 20; ++trial) {
    KnowledgeIndex index({60, 10});
    const int docs = 1 + static_cast<int>(rng() % 6);
    for (int d = 0; d < docs; ++d) {
      std::string body;
      const int n = 5 + static_cast<int>(rng() % 40);
      for (int i = 0; i < n; ++i) body += words[rng() % words.size()] + " ";
      index.add_document(make_doc(body + std::to_string(trial * 10 + d)));
    }
    index.build(*gateway);
    ASSERT_LE(index.chunks().size(), 100u);
    const std::string query = words[rng() % words.size()] + " " + words[rng() % words.size()];
    const auto q = gateway->embed({query})[0];
    const auto hits = index.search(query, q, index.chunks().size(), RetrievalMode::kVector);
    const auto oracle = brute_force(index, q);
    ASSERT_EQ(hits.size(), oracle.size());
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (i > 0) {
        EXPECT_LE(hits[i].score, hits[i - 1].score);
      }
      EXPECT_NEAR(hits[i].score, oracle[i].second, 1e-12);
      if (std::abs(oracle[i].second - (i + 1 < oracle.size() ? oracle[i + 1].second : -2)) > 1e-12 &&
          (i == 0 || std::abs(oracle[i].second - oracle[i - 1].second) > 1e-12)) {
        EXPECT_EQ(hits[i].chunk_id, oracle[i].first);
      }
    }
  }
}

TEST(PersistenceTest, SaveLoadRoundTrip) {
  TempDir dir;
  auto gateway = replay_gateway({});
  KnowledgeIndex index({40, 5});
  Document d = make_doc("Net zero by 2040 across scope 1 and scope 2. Water recycling doubled.", "Plan");
  d.metadata.company = "Acme";
  d.metadata.year = 2023;
  index.add_document(d);
  index.build(*gateway);
  index.set_graph({{"Acme", {"Acme", "Acme Corp"}, EntityType::kOrg, {index.chunks()[0].chunk_id}},
                   {"Scope 1", {"Scope 1"}, EntityType::kMetric, {index.chunks()[0].chunk_id}}},
                  {{"Acme", "Scope 1", "reports", {index.chunks()[0].chunk_id}}});
  index.save(dir.path());
  for (const char* f : {"documents.jsonl", "chunks.jsonl", "vectors.bin", "graph.jsonl"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto bin = read_file(dir / "vectors.bin");
  EXPECT_EQ(bin.size(), 4 + index.chunks().size() * 256 * 4);
  EXPECT_EQ(static_cast<unsigned char>(bin[0]), 0u);  // 256 little-endian
  EXPECT_EQ(static_cast<unsigned char>(bin[1]), 1u);

  const auto loaded = KnowledgeIndex::load(dir.path());
  ASSERT_EQ(loaded.chunks().size(), index.chunks().size());
  EXPECT_EQ(loaded.documents()[0].metadata.year, 2023);
  EXPECT_EQ(loaded.documents()[0].metadata.company, "Acme");
  EXPECT_EQ(loaded.nodes().size(), 2u);
  EXPECT_EQ(loaded.edges().size(), 1u);
  for (std::size_t i = 0; i < loaded.chunks().size(); ++i) {
    EXPECT_EQ(loaded.chunks()[i].embedding, index.chunks()[i].embedding);
  }
  const auto q = gateway->embed({"water"})[0];
  const auto a = index.search("water", q, 3, RetrievalMode::kHybrid);
  const auto b = loaded.search("water", q, 3, RetrievalMode::kHybrid);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].chunk_id, b[i].chunk_id);
}

}  // namespace
}  // namespace esg::retrieval
