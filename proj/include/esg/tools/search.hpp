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

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace esg::tools {

struct SearchResult {
  std::string title;
  std::string url;
  std::string snippet;
  std::optional<int> year;
  std::optional<std::string> content;  // page text when the backend can provide it
};

class SearchBackend {
 public:
  virtual ~SearchBackend() = default;
  // Throws BackendUnavailable when the query cannot be served.
  virtual std::vector<SearchResult> search(std::string_view query) = 0;
  // Page text for a previously returned url, if known.
  virtual std::optional<std::string> fetch(std::string_view url) = 0;
};

// Drops results whose year is present and differs from `filter_year`, then
// keeps at most `max_results`.
std::vector<SearchResult> filter_results(std::vector<SearchResult> results, std::optional<int> filter_year,
                                         std::size_t max_results);

struct FixtureEntry {
  std::string key;
  std::vector<SearchResult> results;
};

// Canned results keyed by case-insensitive substring of the query; the first
// matching key wins. Unmatched queries go to `fallback` when set.
class FixtureSearchBackend final : public SearchBackend {
 public:
  explicit FixtureSearchBackend(std::vector<FixtureEntry> entries,
                                std::shared_ptr<SearchBackend> fallback = nullptr);
  // JSONL of {"key": str, "results": [{"title","url","snippet","year"?,"content"?}]}.
  static std::shared_ptr<FixtureSearchBackend> load(const std::filesystem::path& path,
                                                    std::shared_ptr<SearchBackend> fallback = nullptr);

  std::vector<SearchResult> search(std::string_view query) override;
  std::optional<std::string> fetch(std::string_view url) override;

 private:
  std::vector<FixtureEntry> entries_;
  std::shared_ptr<SearchBackend> fallback_;
};

// JSON-over-HTTP search service: POST {"query": q} to base_url + path,
// expecting {"results": [...]} in the fixture result shape.
class HttpSearchBackend final : public SearchBackend {
 public:
  HttpSearchBackend(std::string base_url, std::string path = "/search", std::string api_key_env = {});
  std::vector<SearchResult> search(std::string_view query) override;
  std::optional<std::string> fetch(std::string_view url) override;

 private:
  std::string base_url_;
  std::string path_;
  std::string api_key_env_;
  std::mutex mu_;
  std::vector<SearchResult> seen_;
};

}  // namespace esg::tools
