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

#include "esg/common/fenced.hpp"

#include "esg/common/text.hpp"

namespace esg {

std::vector<FencedBlock> fenced_blocks(std::string_view text) {
  std::vector<FencedBlock> blocks;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    // Only fences at line start count.
    if (open != 0 && text[open - 1] != '\n') {
      pos = open + 3;
      continue;
    }
    const auto label_end = text.find('\n', open + 3);
    if (label_end == std::string_view::npos) break;
    const auto body_begin = label_end + 1;
    std::size_t search = body_begin;
    std::size_t close = std::string_view::npos;
    while (true) {
      const auto c = text.find("```", search);
      if (c == std::string_view::npos) break;
      if (c == body_begin || text[c - 1] == '\n') {
        close = c;
        break;
      }
      search = c + 3;
    }
    if (close == std::string_view::npos) break;
    FencedBlock block;
    block.label = text::trim(text.substr(open + 3, label_end - open - 3));
    auto body = text.substr(body_begin, close - body_begin);
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    block.body = std::string(body);
    block.begin = open;
    block.end = close + 3;
    blocks.push_back(std::move(block));
    pos = close + 3;
  }
  return blocks;
}

namespace {

std::optional<Json> try_parse(std::string_view s) {
  auto parsed = Json::parse(s.begin(), s.end(), nullptr, false);
  if (parsed.is_discarded()) return std::nullopt;
  return parsed;
}

std::optional<Json> balanced_span(std::string_view text) {
  for (std::size_t start = 0; start < text.size(); ++start) {
    const char open = text[start];
    if (open != '{' && open != '[') continue;
    const char close = open == '{' ? '}' : ']';
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == open) ++depth;
      else if (c == close && --depth == 0) {
        if (auto j = try_parse(text.substr(start, i - start + 1))) return j;
        break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Json> find_json(std::string_view text, std::string_view label) {
  const auto blocks = fenced_blocks(text);
  if (!label.empty()) {
    for (const auto& b : blocks) {
      if (b.label == label) {
        if (auto j = try_parse(b.body)) return j;
      }
    }
  }
  for (const auto& b : blocks) {
    if (auto j = try_parse(b.body)) return j;
  }
  if (auto j = try_parse(text::trim(text))) return j;
  return balanced_span(text);
}

}  // namespace esg
