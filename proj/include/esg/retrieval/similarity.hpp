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
#include <span>
#include <vector>

namespace esg::retrieval {

// Row-major dense matrix of embeddings, one row per chunk.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  explicit EmbeddingMatrix(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t rows() const { return dimension_ == 0 ? 0 : data_.size() / dimension_; }

  void append(std::span<const double> row);
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }
  void clear() { data_.clear(); }

 private:
  std::size_t dimension_ = 0;
  std::vector<double> data_;
};

// out[i] = cos(query, row i); 0 for zero-norm rows. Both variants evaluate
// each row with the same operation order, so results are bit-identical.
void cosine_scan(std::span<const double> query, const EmbeddingMatrix& matrix, std::span<double> out);
void cosine_scan_serial(std::span<const double> query, const EmbeddingMatrix& matrix,
                        std::span<double> out);

}  // namespace esg::retrieval
