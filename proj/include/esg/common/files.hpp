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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace esg {

using Json = nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, std::string_view contents);
void append_line(const fs::path& path, std::string_view line);

// True when `path` (after lexical normalization against the current
// directory) lies inside `root`.
bool is_within(const fs::path& path, const fs::path& root);

std::string sha256_hex(std::string_view data);
std::uint64_t fnv1a64(std::string_view data);

// Lowercase hex of `bytes` random bytes drawn from the OS entropy source.
std::string random_hex(std::size_t bytes);

// Compact single-line JSON; invalid UTF-8 is replaced rather than thrown on.
std::string dump_line(const Json& value);

}  // namespace esg
