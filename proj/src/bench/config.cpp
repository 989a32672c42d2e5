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
#include <set>

#include "esg/bench/harness.hpp"
#include "esg/common/error.hpp"
#include "esg/llm/http_provider.hpp"

namespace esg::bench {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::kConfigError, msg); }

void only_keys(const Json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
      bad("unknown key '" + k + "' in " + where);
    }
  }
}

fs::path resolve(const std::string& p, const fs::path& base) {
  fs::path out = p;
  return (out.is_relative() ? base / out : out).lexically_normal();
}

template <typename T>
T get_or(const Json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const Json::exception&) {
    bad(where + "." + key + " has the wrong type");
  }
}

std::vector<std::string> string_list(const Json& v, const std::string& where) {
  if (!v.is_array()) bad(where + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) bad(where + " must be a list of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

}  // namespace

BenchConfig parse_config(const Json& j, const fs::path& base) {
  only_keys(j, "config", {"label", "providers", "roles", "embedder", "budgets", "tools", "retrieval", "judges", "agent"});
  BenchConfig c;
  c.raw = j;
  c.label = get_or<std::string>(j, "label", c.label, "config");

  if (j.contains("providers")) {
    if (!j["providers"].is_array()) bad("providers must be a list");
    std::set<std::string> ids;
    for (const auto& pj : j["providers"]) {
      only_keys(pj, "provider", {"id", "kind", "base_url", "chat_path", "embed_path", "api_key_env", "transcript", "timeout_s"});
      ProviderConfig p;
      p.id = get_or<std::string>(pj, "id", "", "provider");
      if (p.id.empty()) bad("every provider needs an id");
      if (!ids.insert(p.id).second) bad("duplicate provider id '" + p.id + "'");
      p.kind = get_or<std::string>(pj, "kind", p.kind, "provider");
      p.base_url = get_or<std::string>(pj, "base_url", "", "provider");
      p.chat_path = get_or<std::string>(pj, "chat_path", p.chat_path, "provider");
      p.embed_path = get_or<std::string>(pj, "embed_path", p.embed_path, "provider");
      p.api_key_env = get_or<std::string>(pj, "api_key_env", "", "provider");
      p.timeout_s = get_or<int>(pj, "timeout_s", p.timeout_s, "provider");
      if (pj.contains("transcript")) p.transcript = resolve(get_or<std::string>(pj, "transcript", "", "provider"), base).string();
      if (p.kind == "openai" && p.base_url.empty()) bad("provider '" + p.id + "' needs base_url");
      if (p.kind == "replay" && p.transcript.empty()) bad("provider '" + p.id + "' needs transcript");
      if (p.kind != "openai" && p.kind != "replay") bad("provider kind must be openai or replay");
      c.providers.push_back(std::move(p));
    }
  }
  auto known_provider = [&](const std::string& id) {
    return std::any_of(c.providers.begin(), c.providers.end(), [&](const auto& p) { return p.id == id; });
  };

  if (j.contains("roles")) {
    if (!j["roles"].is_object()) bad("roles must be an object");
    for (const auto& [role, rj] : j["roles"].items()) {
      only_keys(rj, "roles." + role, {"provider", "model"});
      llm::RoleBinding b{get_or<std::string>(rj, "provider", "", "roles." + role),
                         get_or<std::string>(rj, "model", "", "roles." + role)};
      if (!known_provider(b.provider_id)) bad("role '" + role + "' names unknown provider '" + b.provider_id + "'");
      c.agent.role_models[role] = b.model;
      c.roles[role] = b;
    }
  }

  if (j.contains("embedder")) {
    const auto& ej = j["embedder"];
    only_keys(ej, "embedder", {"kind", "provider", "model", "dimension"});
    c.embedder.kind = get_or<std::string>(ej, "kind", c.embedder.kind, "embedder");
    c.embedder.provider = get_or<std::string>(ej, "provider", "", "embedder");
    c.embedder.model = get_or<std::string>(ej, "model", "", "embedder");
    c.embedder.dimension = get_or<std::size_t>(ej, "dimension", c.embedder.dimension, "embedder");
    if (c.embedder.kind != "stub" && c.embedder.kind != "openai") bad("embedder kind must be stub or openai");
    if (c.embedder.kind == "openai" && !known_provider(c.embedder.provider)) bad("embedder names an unknown provider");
    if (c.embedder.dimension == 0) bad("embedder dimension must be positive");
  }

  if (j.contains("budgets")) {
    if (!j["budgets"].is_object()) bad("budgets must be an object");
    for (const auto& [role, v] : j["budgets"].items()) {
      if (!v.is_number_integer()) bad("budgets." + role + " must be an integer");
      c.agent.step_budget[role] = v.get<int>();
    }
  }

  if (j.contains("tools")) {
    const auto& tj = j["tools"];
    only_keys(tj, "tools", {"disabled", "sandbox", "search", "exec_timeout_s"});
    if (tj.contains("disabled")) {
      for (auto& name : string_list(tj["disabled"], "tools.disabled")) c.agent.disabled_tools.insert(name);
    }
    if (tj.contains("sandbox")) c.sandbox_command = string_list(tj["sandbox"], "tools.sandbox");
    c.exec_timeout_s = get_or<int>(tj, "exec_timeout_s", c.exec_timeout_s, "tools");
    if (tj.contains("search")) {
      const auto& sj = tj["search"];
      only_keys(sj, "tools.search", {"fixtures", "base_url"});
      if (sj.contains("fixtures")) c.search_fixtures = resolve(get_or<std::string>(sj, "fixtures", "", "tools.search"), base);
      if (sj.contains("base_url")) c.search_url = get_or<std::string>(sj, "base_url", "", "tools.search");
    }
  }

  if (j.contains("retrieval")) {
    const auto& rj = j["retrieval"];
    only_keys(rj, "retrieval", {"index", "corpus", "top_k", "mode", "chunk_size", "chunk_overlap"});
    if (rj.contains("index")) c.index_dir = resolve(get_or<std::string>(rj, "index", "", "retrieval"), base);
    if (rj.contains("corpus")) c.corpus_dir = resolve(get_or<std::string>(rj, "corpus", "", "retrieval"), base);
    c.agent.retrieval_top_k = get_or<std::size_t>(rj, "top_k", c.agent.retrieval_top_k, "retrieval");
    if (rj.contains("mode")) {
      try {
        c.retrieval_mode = retrieval::retrieval_mode_from_string(get_or<std::string>(rj, "mode", "", "retrieval"));
      } catch (const Error& e) {
        bad(e.what());
      }
    }
    c.chunking.size = get_or<std::size_t>(rj, "chunk_size", c.chunking.size, "retrieval");
    c.chunking.overlap = get_or<std::size_t>(rj, "chunk_overlap", c.chunking.overlap, "retrieval");
  }

  if (j.contains("judges")) c.judges = string_list(j["judges"], "judges");

  if (j.contains("agent")) {
    const auto& aj = j["agent"];
    only_keys(aj, "agent", {"plan", "verify", "timeout_s", "memory_every", "max_retries", "observation_limit"});
    c.agent.plan = get_or<bool>(aj, "plan", c.agent.plan, "agent");
    c.agent.verify = get_or<bool>(aj, "verify", c.agent.verify, "agent");
    c.agent.max_retries = get_or<int>(aj, "max_retries", c.agent.max_retries, "agent");
    c.agent.memory_every = get_or<int>(aj, "memory_every", c.agent.memory_every, "agent");
    c.agent.observation_limit = get_or<std::size_t>(aj, "observation_limit", c.agent.observation_limit, "agent");
    if (aj.contains("timeout_s")) c.agent.timeout = std::chrono::seconds(get_or<int>(aj, "timeout_s", 600, "agent"));
  }

  c.agent.validate();
  return c;
}

BenchConfig load_config(const fs::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    bad(path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return parse_config(j, fs::absolute(path).parent_path());
}

std::vector<std::string> replay_roles(const BenchConfig& config) {
  std::set<std::string> roles = {"main",    "planner",      "verifier", "memory",    "deep_researcher",
                                 "deep_analyzer", "reformulator", "plotter", "extractor", "citation_judge"};
  for (const auto& j : config.judges) roles.insert(j);
  for (const auto& [r, b] : config.roles) roles.insert(r);
  return {roles.begin(), roles.end()};
}

GatewayFactory::GatewayFactory(BenchConfig config, std::optional<fs::path> replay)
    : config_(std::move(config)), replay_(std::move(replay)) {
  if (replay_ && !fs::exists(*replay_)) bad("replay path not found: " + replay_->string());
}

std::unique_ptr<llm::Gateway> GatewayFactory::make(const std::string& key) const {
  auto g = std::make_unique<llm::Gateway>();
  if (replay_) {
    llm::ReplayTranscript transcript;
    if (fs::is_directory(*replay_)) {
      const auto file = *replay_ / (key + ".jsonl");
      if (fs::exists(file)) transcript = llm::load_transcript(file);
    } else {
      transcript = llm::load_transcript(*replay_);
    }
    g->set_sleeper([](std::chrono::milliseconds) {});  // scripted replies never need a backoff
    g->add_provider(std::make_shared<llm::ReplayProvider>(std::move(transcript), "replay"));
    for (const auto& role : replay_roles(config_)) g->bind_role(role, {"replay", "replay"});
    g->set_embedder(std::make_shared<llm::StubEmbedder>(config_.embedder.dimension));
    return g;
  }
  std::map<std::string, llm::HttpEndpoint> endpoints;
  for (const auto& p : config_.providers) {
    if (p.kind == "replay") {
      g->add_provider(std::make_shared<llm::ReplayProvider>(llm::load_transcript(p.transcript), p.id));
      continue;
    }
    llm::HttpEndpoint ep{p.id, p.base_url, p.chat_path, p.embed_path, p.api_key_env, std::chrono::seconds(p.timeout_s)};
    endpoints[p.id] = ep;
    g->add_provider(std::make_shared<llm::HttpChatProvider>(ep));
  }
  for (const auto& [role, b] : config_.roles) g->bind_role(role, b);
  if (config_.embedder.kind == "openai") {
    const auto it = endpoints.find(config_.embedder.provider);
    if (it == endpoints.end()) bad("embedder provider must be an openai provider");
    g->set_embedder(std::make_shared<llm::HttpEmbedder>(it->second, config_.embedder.model, config_.embedder.dimension));
  } else {
    g->set_embedder(std::make_shared<llm::StubEmbedder>(config_.embedder.dimension));
  }
  return g;
}

retrieval::KnowledgeIndex build_index(const fs::path& dir, const retrieval::ChunkingOptions& chunking,
                                      llm::Gateway& gateway) {
  const auto& extractors = retrieval::default_extractors();
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && extractors.supports(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorKind::kEmptyInput, "no supported documents under " + dir.string());
  retrieval::KnowledgeIndex index(chunking);
  for (const auto& f : files) index.add_document(retrieval::ingest(f));
  index.build(gateway);
  return index;
}

tools::ToolEnvironment make_environment(const BenchConfig& config) {
  tools::ToolEnvironment env;
  if (config.index_dir) {
    env.index = std::make_shared<const retrieval::KnowledgeIndex>(retrieval::KnowledgeIndex::load(*config.index_dir));
  } else if (config.corpus_dir) {
    auto gateway = GatewayFactory(config, std::nullopt).make("ingest");
    env.index = std::make_shared<const retrieval::KnowledgeIndex>(build_index(*config.corpus_dir, config.chunking, *gateway));
  }
  std::shared_ptr<tools::SearchBackend> http;
  if (config.search_url) http = std::make_shared<tools::HttpSearchBackend>(*config.search_url);
  if (config.search_fixtures) {
    env.search = tools::FixtureSearchBackend::load(*config.search_fixtures, http);
  } else {
    env.search = http;
  }
  env.sandbox_command = config.sandbox_command;
  env.exec_timeout_s = config.exec_timeout_s;
  env.retrieval_top_k = config.agent.retrieval_top_k;
  env.retrieval_mode = config.retrieval_mode;
  return env;
}

}  // namespace esg::bench
