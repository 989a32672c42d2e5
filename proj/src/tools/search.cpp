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

#include "esg/tools/search.hpp"

#include <httplib.h>

#include <cstdlib>

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"
#include "esg/common/text.hpp"

namespace esg::tools {

namespace {

SearchResult result_from(const Json& j) {
  SearchResult r;
  r.url = j.value("url", std::string());
  if (r.url.empty()) throw Error(ErrorKind::kSchemaError, "search result without url");
  r.title = j.value("title", r.url);
  r.snippet = j.value("snippet", std::string());
  if (j.contains("year") && j["year"].is_number_integer()) r.year = j["year"].get<int>();
  if (j.contains("content") && j["content"].is_string()) r.content = j["content"].get<std::string>();
  return r;
}

std::vector<SearchResult> results_from(const Json& arr) {
  std::vector<SearchResult> out;
  if (!arr.is_array()) throw Error(ErrorKind::kSchemaError, "\"results\" must be an array");
  for (const auto& r : arr) out.push_back(result_from(r));
  return out;
}

}  // namespace

std::vector<SearchResult> filter_results(std::vector<SearchResult> results, std::optional<int> filter_year,
                                         std::size_t max_results) {
  std::vector<SearchResult> out;
  for (auto& r : results) {
    if (filter_year && r.year && *r.year != *filter_year) continue;
    if (out.size() >= max_results) break;
    out.push_back(std::move(r));
  }
  return out;
}

FixtureSearchBackend::FixtureSearchBackend(std::vector<FixtureEntry> entries, std::shared_ptr<SearchBackend> fallback)
    : entries_(std::move(entries)), fallback_(std::move(fallback)) {}

std::shared_ptr<FixtureSearchBackend> FixtureSearchBackend::load(const std::filesystem::path& path,
                                                                 std::shared_ptr<SearchBackend> fallback) {
  std::vector<FixtureEntry> entries;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(read_file(path))) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = Json::parse(line);
      entries.push_back({j.at("key").get<std::string>(), results_from(j.at("results"))});
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::kSchemaError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::kSchemaError, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return std::make_shared<FixtureSearchBackend>(std::move(entries), std::move(fallback));
}

std::vector<SearchResult> FixtureSearchBackend::search(std::string_view query) {
  for (const auto& e : entries_) {
    if (text::icontains(query, e.key)) return e.results;
  }
  if (fallback_) return fallback_->search(query);
  throw Error(ErrorKind::kBackendUnavailable,
              "no search fixture matches \"" + std::string(query) + "\" and no live backend is configured");
}

std::optional<std::string> FixtureSearchBackend::fetch(std::string_view url) {
  for (const auto& e : entries_) {
    for (const auto& r : e.results) {
      if (r.url == url) return r.content ? r.content : std::optional<std::string>(r.snippet);
    }
  }
  return fallback_ ? fallback_->fetch(url) : std::nullopt;
}

HttpSearchBackend::HttpSearchBackend(std::string base_url, std::string path, std::string api_key_env)
    : base_url_(std::move(base_url)), path_(std::move(path)), api_key_env_(std::move(api_key_env)) {}

std::vector<SearchResult> HttpSearchBackend::search(std::string_view query) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(std::chrono::seconds(60));
  httplib::Headers headers;
  if (!api_key_env_.empty()) {
    const char* key = std::getenv(api_key_env_.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorKind::kBackendUnavailable, "environment variable " + api_key_env_ + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(path_, headers, dump_line({{"query", std::string(query)}}), "application/json");
  if (!res || res->status < 200 || res->status >= 300) {
    throw Error(ErrorKind::kBackendUnavailable,
                "search service " + base_url_ + " failed: " +
                    (res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error())));
  }
  const auto j = Json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.contains("results")) {
    throw Error(ErrorKind::kBackendUnavailable, "search service returned an unexpected body");
  }
  auto results = results_from(j["results"]);
  std::lock_guard lock(mu_);
  seen_.insert(seen_.end(), results.begin(), results.end());
  return results;
}

std::optional<std::string> HttpSearchBackend::fetch(std::string_view url) {
  std::lock_guard lock(mu_);
  for (const auto& r : seen_) {
    if (r.url == url) return r.content ? r.content : std::optional<std::string>(r.snippet);
  }
  return std::nullopt;
}

}  // namespace esg::tools
