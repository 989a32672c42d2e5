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

#include <cmath>

#include "esg/common/error.hpp"
#include "esg/common/files.hpp"
#include "esg/common/text.hpp"
#include "esg/llm/provider.hpp"

namespace esg::llm {

Embedding StubEmbedder::embed_one(std::string_view text) const {
  Embedding v(dimension_, 0.0);
  const std::string padded = " " + text::to_lower(text) + " ";
  const auto offsets = text::codepoint_offsets(padded);
  const std::size_t n_cp = offsets.size() - 1;
  constexpr std::size_t kGram = 3;
  if (n_cp < kGram) {
    v[fnv1a64(padded) % dimension_] += 1.0;
  } else {
    for (std::size_t i = 0; i + kGram <= n_cp; ++i) {
      const auto gram = std::string_view(padded).substr(offsets[i], offsets[i + kGram] - offsets[i]);
      v[fnv1a64(gram) % dimension_] += 1.0;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& x : v) x /= norm;
  }
  return v;
}

std::vector<Embedding> StubEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<Embedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

}  // namespace esg::llm
