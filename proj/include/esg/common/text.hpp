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
#include <string>
#include <string_view>
#include <vector>

namespace esg::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool icontains(std::string_view haystack, std::string_view needle);
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);

// Byte offsets of every UTF-8 code point start in `s`, followed by s.size().
// Malformed bytes count as one code point each.
std::vector<std::size_t> codepoint_offsets(std::string_view s);
std::size_t codepoint_length(std::string_view s);

// Returns at most `max_codepoints` code points of `s`, appending "..." when cut.
std::string truncate(std::string_view s, std::size_t max_codepoints);

// Replaces invalid UTF-8 sequences with U+FFFD so the result is JSON-safe.
std::string sanitize_utf8(std::string_view s);

}  // namespace esg::text
