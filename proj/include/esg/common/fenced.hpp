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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esg/common/files.hpp"

namespace esg {

// A ``` fenced block in model output. `label` is the info string after the
// opening fence (trimmed, may be empty).
struct FencedBlock {
  std::string label;
  std::string body;
  std::size_t begin = 0;  // offset of the opening fence
  std::size_t end = 0;    // offset one past the closing fence
};

std::vector<FencedBlock> fenced_blocks(std::string_view text);

// Locates a JSON value in free-form model output: first a fenced block with
// `label` (if given), then any fenced block that parses, then the first
// balanced {...} or [...] span that parses.
std::optional<Json> find_json(std::string_view text, std::string_view label = {});

}  // namespace esg
