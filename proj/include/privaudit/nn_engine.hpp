// Copyright 2026 The PrivAudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVAUDIT_NN_ENGINE_HPP
#define PRIVAUDIT_NN_ENGINE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "privaudit/dataset.hpp"

namespace privaudit {

struct Neighbor {
  std::size_t index;  // row in the reference matrix
  double distance;    // Euclidean
};

/// Per query row: its k nearest reference rows, distance-ascending,
/// equal distances broken toward the lower reference index.
struct NeighborResult {
  std::size_t k = 0;
  std::vector<std::vector<Neighbor>> neighbors;  // one list per query row
};

// Production path: kd-tree search, queries fanned out with OpenMP.
// `exclude_self` is only meaningful when `queries` and `reference` are the
// same matrix; it drops the reference row with the query's own index.
NeighborResult knn(const EncodedMatrix& queries, const EncodedMatrix& reference, std::size_t k,
                   bool exclude_self = false);

// Serial O(n^2) scan kept as the oracle for the tree path. Same tie-break,
// same per-pair distance evaluation, so results match exactly.
NeighborResult knn_brute_force(const EncodedMatrix& queries, const EncodedMatrix& reference,
                               std::size_t k, bool exclude_self = false);

/// Convenience: nearest-neighbor distance per query row (k = 1).
std::vector<double> nn_distances(const EncodedMatrix& queries, const EncodedMatrix& reference,
                                 bool exclude_self = false);

struct ColumnEntropy {
  std::string column;
  double bits = 0.0;
};

// Shannon entropy of the empirical value distribution, in bits. Numeric
// columns are histogrammed first (Freedman-Diaconis width, at most 32 bins).
ColumnEntropy column_entropy(const Table& table, const std::string& column);

}  // namespace privaudit

#endif  // PRIVAUDIT_NN_ENGINE_HPP
