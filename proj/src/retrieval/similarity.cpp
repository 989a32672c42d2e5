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

#include "esg/retrieval/similarity.hpp"

#include <cmath>

#include "esg/common/error.hpp"

namespace esg::retrieval {

void EmbeddingMatrix::append(std::span<const double> row) {
  if (row.size() != dimension_) {
    throw Error(ErrorKind::kConfigError, "embedding dimension " + std::to_string(row.size()) +
                                             " does not match index dimension " +
                                             std::to_string(dimension_));
  }
  data_.insert(data_.end(), row.begin(), row.end());
}

namespace {

inline double row_cosine(const double* q, double q_norm, const double* r, std::size_t dim) {
  double dot = 0.0;
  double rr = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    dot += q[k] * r[k];
    rr += r[k] * r[k];
  }
  if (rr == 0.0 || q_norm == 0.0) return 0.0;
  return dot / (q_norm * std::sqrt(rr));
}

double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_shapes(std::span<const double> query, const EmbeddingMatrix& matrix, std::span<double> out) {
  if (query.size() != matrix.dimension() || out.size() != matrix.rows()) {
    throw Error(ErrorKind::kConfigError, "cosine_scan shape mismatch");
  }
}

}  // namespace

void cosine_scan(std::span<const double> query, const EmbeddingMatrix& matrix, std::span<double> out) {
  check_shapes(query, matrix, out);
  const double q_norm = norm_of(query);
  const auto rows = static_cast<long long>(matrix.rows());
  const auto dim = matrix.dimension();
  const double* q = query.data();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < rows; ++i) {
    out[static_cast<std::size_t>(i)] =
        row_cosine(q, q_norm, matrix.row(static_cast<std::size_t>(i)).data(), dim);
  }
}

void cosine_scan_serial(std::span<const double> query, const EmbeddingMatrix& matrix,
                        std::span<double> out) {
  check_shapes(query, matrix, out);
  const double q_norm = norm_of(query);
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out[i] = row_cosine(query.data(), q_norm, matrix.row(i).data(), matrix.dimension());
  }
}

}  // namespace esg::retrieval
